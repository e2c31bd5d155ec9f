#include "nlocal/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nlocal/states.hpp"

namespace nlocal {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

double number(const std::string& text, const std::string& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path, "'" + text + "' is not a number");
    }
}

std::vector<double> numbers(const std::string& text, const std::string& path, std::size_t expected) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(number(p, path));
    if (out.size() != expected)
        throw ConfigError(path, "expected " + std::to_string(expected) + " parameters, got " +
                                    std::to_string(out.size()));
    return out;
}

Complex complex_entry(const nlohmann::json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(path, "complex entries are numbers or [re, im] pairs");
}

SourceState parse_descriptor(const std::string& text, const std::string& path) {
    const auto colon = text.find(':');
    const std::string tag = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto one = [&] { return numbers(rest, path, 1)[0]; };

    try {
        if (tag == "phi+") return phi_plus();
        if (tag == "phi-") return phi_minus();
        if (tag == "psi+") return psi_plus();
        if (tag == "psi-") return psi_minus();
        if (tag == "schmidt") return pure_schmidt(one());
        if (tag == "werner") return werner(one());
        if (tag == "gghz") return gghz(one());
        if (tag == "even") return even_symmetric(one());
        if (tag == "nghz") return nghz(static_cast<int>(one()));
        if (tag == "w") {
            if (rest.empty()) return w_state(std::acos(1.0 / std::sqrt(3.0)), std::numbers::pi / 4);
            const auto p = numbers(rest, path, 2);
            return w_state(p[0], p[1]);
        }
        if (tag == "bisep") {
            const auto fields = split(rest, ':');
            if (fields.size() < 2 || fields.size() > 3) throw ConfigError(path, "bisep:CUT:c0[:v0]");
            BisepParams b;
            b.cut = parse_cut(fields[0]);
            b.c0 = number(fields[1], path);
            if (fields.size() == 3) b.v0 = number(fields[2], path);
            return biseparable(b);
        }
        if (tag == "product") {
            const auto p = numbers(rest, path, 6);
            std::array<std::array<Complex, 2>, 3> amps;
            for (int q = 0; q < 3; ++q) {
                const double t = p[2 * q], ph = p[2 * q + 1];
                amps[q] = {Complex(std::cos(t / 2), 0.0), std::polar(std::sin(t / 2), ph)};
            }
            return product3(amps);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "unknown state family '" + tag + "'");
}

}  // namespace

SourceState parse_state(const nlohmann::json& descriptor, const std::string& path) {
    if (descriptor.is_string()) return parse_descriptor(descriptor.get<std::string>(), path);
    if (!descriptor.is_object()) throw ConfigError(path, "state descriptor must be a string or object");
    try {
        if (descriptor.contains("ket")) {
            const auto& a = descriptor.at("ket");
            if (!a.is_array()) throw ConfigError(path + ".ket", "expected an array");
            ComplexVector v(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) v(i) = complex_entry(a[i], path + ".ket");
            return v;
        }
        if (descriptor.contains("density")) {
            const auto& rows = descriptor.at("density");
            if (!rows.is_array() || rows.empty()) throw ConfigError(path + ".density", "expected a square array");
            ComplexMatrix m(rows.size(), rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (!rows[r].is_array() || rows[r].size() != rows.size())
                    throw ConfigError(path + ".density", "expected a square array");
                for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = complex_entry(rows[r][c], path + ".density");
            }
            return m;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "state object needs a 'ket' or 'density' field");
}

SourceState parse_state(const std::string& descriptor) { return parse_descriptor(descriptor, "state"); }

ComplexVector parse_pure_state(const nlohmann::json& descriptor, const std::string& path) {
    const auto s = parse_state(descriptor, path);
    if (!s.is_pure()) throw ConfigError(path, "a pure state is required here");
    return s.ket();
}

OptimizeConfig parse_optimizer(const nlohmann::json& section, const std::string& path, std::uint64_t seed,
                               int threads) {
    OptimizeConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    if (section.is_null()) return cfg;
    if (!section.is_object()) throw ConfigError(path, "expected an object");
    cfg.restarts = field_or<int>(section, "restarts", path, cfg.restarts);
    cfg.max_iters = field_or<int>(section, "max_iters", path, cfg.max_iters);
    cfg.tolerance = field_or<double>(section, "tolerance", path, cfg.tolerance);
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    return cfg;
}

AnyNetwork parse_network(const nlohmann::json& section, const std::string& path) {
    const auto topology = required<std::string>(section, "topology", path);
    if (!section.contains("sources") || !section.at("sources").is_array())
        throw ConfigError(path + ".sources", "expected an array of state descriptors");
    const auto& sources = section.at("sources");
    try {
        if (topology == "linear") {
            std::vector<SourceState> states;
            for (std::size_t i = 0; i < sources.size(); ++i)
                states.push_back(parse_state(sources[i], path + ".sources[" + std::to_string(i) + "]"));
            return build_linear(std::move(states));
        }
        if (topology == "nonlinear") {
            std::vector<ComplexVector> states;
            for (std::size_t i = 0; i < sources.size(); ++i)
                states.push_back(parse_pure_state(sources[i], path + ".sources[" + std::to_string(i) + "]"));
            const auto arrangement =
                field_or<std::vector<int>>(section, "arrangement", path, std::vector<int>(states.size(), 1));
            std::optional<std::vector<std::vector<int>>> routing;
            if (section.contains("routing"))
                routing = required<std::vector<std::vector<int>>>(section, "routing", path);
            return build_nonlinear(std::move(states), arrangement, routing);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + ".topology", "expected 'linear' or 'nonlinear'");
}

nlohmann::json load_document(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file, "cannot open config file");
    try {
        return nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(file, e.what());
    }
}

}  // namespace nlocal
