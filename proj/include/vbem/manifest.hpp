// Copyright 2026 The vbem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef VBEM_MANIFEST_HPP
#define VBEM_MANIFEST_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace vbem {

#ifndef VBEM_VERSION
#define VBEM_VERSION "0.1.0"
#endif

inline constexpr const char *kVersion = VBEM_VERSION;

/// 64-bit FNV-1a over a byte range, chainable through `hash`.
inline std::uint64_t fnv1a64(const char *data, std::size_t size, std::uint64_t hash = 0xcbf29ce484222325ULL) {
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= static_cast<unsigned char>(data[i]);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string file_digest(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    }
    return "fnv1a64:" + hex64(h);
}

/// Record of one command invocation: what went in, what came out.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    std::map<std::string, std::string> input_digests;   // name -> digest or "builtin"
    std::map<std::string, std::string> outputs;         // name -> path
    std::map<std::string, std::string> output_digests;  // name -> digest

    void add_output(const std::string &name, const std::filesystem::path &path) {
        outputs[name] = path.filename().string();
        output_digests[name] = file_digest(path);
    }
};

inline void to_json(nlohmann::json &j, const RunManifest &m) {
    j = nlohmann::json{{"command", m.command},        {"config", m.config},
                       {"seed", m.seed},              {"version", m.version},
                       {"input_digests", m.input_digests}, {"outputs", m.outputs},
                       {"output_digests", m.output_digests}};
}

inline void from_json(const nlohmann::json &j, RunManifest &m) {
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    m.output_digests = j.at("output_digests").get<std::map<std::string, std::string>>();
}

}  // namespace vbem

#endif
