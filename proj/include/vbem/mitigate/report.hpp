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


#ifndef VBEM_MITIGATE_REPORT_HPP
#define VBEM_MITIGATE_REPORT_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vbem/mitigate/analysis.hpp"

namespace vbem::mitigate {

/// Rounds covered by any basket, as a 0/1 mask over the pass.
inline std::vector<std::uint8_t> basket_mask(std::int64_t total, const std::vector<RoundRange> &baskets) {
    std::vector<std::uint8_t> mask(total, 0);
    for (const auto &b : baskets) {
        for (std::int64_t i = std::max<std::int64_t>(b.begin, 0); i < std::min(b.end, total); ++i) mask[i] = 1;
    }
    return mask;
}

inline std::string format_double(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// CSV with header `round_index,phi` and, when a mask is given, `in_basket`.
inline void write_phi_csv(std::ostream &out, const std::vector<double> &phi, std::int64_t offset,
                          const std::vector<std::uint8_t> *mask = nullptr) {
    out << "round_index,phi" << (mask ? ",in_basket" : "") << '\n';
    for (std::size_t i = 0; i < phi.size(); ++i) {
        out << offset + static_cast<std::int64_t>(i) << ',' << format_double(phi[i]);
        if (mask) out << ',' << int((*mask)[i]);
        out << '\n';
    }
}

/// Pass rate 1 - phi against round index, with the 1 - p_tilde threshold
/// and shaded baskets. Output depends only on the inputs.
inline std::string render_pass_rate_svg(const std::vector<double> &phi, std::int64_t offset, double p_tilde,
                                        const std::vector<RoundRange> &baskets, const std::string &title) {
    constexpr double kWidth = 900, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto n = static_cast<double>(std::max<std::size_t>(phi.size(), 1));
    constexpr double kYMin = 0.5;  // pass-rate axis runs from 0.5 to 1
    auto x_of = [&](double i) { return kLeft + plot_w * i / n; };
    auto y_of = [&](double rate) { return kTop + plot_h * (1 - (std::clamp(rate, kYMin, 1.0) - kYMin) / (1 - kYMin)); };
    auto f = [](double v) { return format_double(v, 2); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
    for (const auto &b : baskets) {
        const double x0 = x_of(static_cast<double>(b.begin - offset));
        const double x1 = x_of(static_cast<double>(b.end - offset));
        s << "<rect x=\"" << f(x0) << "\" y=\"" << kTop << "\" width=\"" << f(x1 - x0) << "\" height=\"" << plot_h
          << "\" fill=\"#9ecae1\" fill-opacity=\"0.45\"/>\n";
    }
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double rate = kYMin + t * 0.1;
        s << "<text x=\"" << kLeft - 8 << "\" y=\"" << f(y_of(rate) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(rate, 1)
          << "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        const double i = n * t / 4;
        s << "<text x=\"" << f(x_of(i)) << "\" y=\"" << kHeight - kBottom + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << offset + static_cast<std::int64_t>(i) << "</text>\n";
    }
    s << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">round</text>\n";
    s << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">test pass rate</text>\n";
    const double threshold = y_of(1 - p_tilde);
    s << "<line x1=\"" << kLeft << "\" y1=\"" << f(threshold) << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << f(threshold) << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
    // At most ~2000 vertices: plot the mean of each bucket.
    const std::size_t bucket = std::max<std::size_t>(1, phi.size() / 2000);
    s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < phi.size(); i += bucket) {
        const std::size_t end = std::min(phi.size(), i + bucket);
        double sum = 0;
        for (std::size_t k = i; k < end; ++k) sum += phi[k];
        const double mean = sum / static_cast<double>(end - i);
        s << f(x_of(static_cast<double>(i))) << ',' << f(y_of(1 - mean)) << ' ';
    }
    s << "\"/>\n</svg>\n";
    return s.str();
}

}  // namespace vbem::mitigate

#endif
