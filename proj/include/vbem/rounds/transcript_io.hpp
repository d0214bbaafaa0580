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


#ifndef VBEM_ROUNDS_TRANSCRIPT_IO_HPP
#define VBEM_ROUNDS_TRANSCRIPT_IO_HPP

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/rounds/rounds.hpp"

namespace vbem::rounds {

/// One JSON object per line, in round order.
class TranscriptWriter {
   public:
    explicit TranscriptWriter(const std::filesystem::path &path) : out_(path, std::ios::binary) {
        if (!out_) {
            throw std::runtime_error("cannot write " + path.string());
        }
    }
    void write(const RoundTranscript &t) {
        out_ << nlohmann::json(t).dump() << '\n';
    }
    void flush() {
        out_.flush();
    }

   private:
    std::ofstream out_;
};

inline std::vector<RoundTranscript> read_transcripts(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::vector<RoundTranscript> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(nlohmann::json::parse(line).get<RoundTranscript>());
        } catch (const std::exception &e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace vbem::rounds

#endif
