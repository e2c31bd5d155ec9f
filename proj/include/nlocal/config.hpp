#pragma once

// Run configuration documents and the textual state descriptors they use.
//
// State descriptors:
//   phi+ phi- psi+ psi-         Bell states
//   schmidt:g0                  g0|00> + sqrt(1-g0^2)|11>
//   werner:v                    Werner state
//   gghz:beta                   cos(beta)|000> + sin(beta)|111>
//   w | w:w1,w2                 W state (default: equal weights)
//   bisep:CUT:c0[:v0]           biseparable, CUT one of 12|3 13|2 23|1
//   product:t1,p1,t2,p2,t3,p3   product of three Bloch-sphere qubits
//   even:alpha                  alpha|000> + b(|011> + |101> + |110>)
//   nghz:n                      n-qubit GHZ state
// or a JSON object {"ket": [[re, im], ...]} / {"density": [[[re, im], ...], ...]}.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlocal/error.hpp"
#include "nlocal/network.hpp"
#include "nlocal/optimize.hpp"

namespace nlocal {

// A malformed configuration; `path` locates the offending field.
class ConfigError : public InvalidArgument {
  public:
    ConfigError(std::string path, const std::string& message)
        : InvalidArgument(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

SourceState parse_state(const nlohmann::json& descriptor, const std::string& path);
SourceState parse_state(const std::string& descriptor);

// Pure states only; a density descriptor raises ConfigError.
ComplexVector parse_pure_state(const nlohmann::json& descriptor, const std::string& path);

// Reads "restarts", "max_iters", "tolerance" from an optimizer section.
OptimizeConfig parse_optimizer(const nlohmann::json& section, const std::string& path, std::uint64_t seed,
                               int threads);

// Network section: {"topology": "linear"|"nonlinear", "sources": [...],
// "arrangement": [..], "routing": [[..], ..]}.
AnyNetwork parse_network(const nlohmann::json& section, const std::string& path);

// Reads a required or optional typed field, reporting the field path.
template <class T>
T required(const nlohmann::json& section, const std::string& key, const std::string& path) {
    if (!section.is_object() || !section.contains(key)) throw ConfigError(path + "." + key, "missing");
    try {
        return section.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + "." + key, e.what());
    }
}

template <class T>
T field_or(const nlohmann::json& section, const std::string& key, const std::string& path, T fallback) {
    if (!section.is_object() || !section.contains(key)) return fallback;
    return required<T>(section, key, path);
}

nlohmann::json load_document(const std::string& file);

}  // namespace nlocal
