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


#ifndef VBEM_ESTIMATE_MINIMIZE_HPP
#define VBEM_ESTIMATE_MINIMIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/estimate/bound.hpp"

namespace vbem::estimate {

enum class Status { done, abort };

struct EstimationResult {
    Status status = Status::abort;
    std::string reason;  // set when aborted
    double eps_max = 1;
    double eps_ver = 1;
    double eps_rej = 1;
    double branch1 = 1;
    double branch2 = 1;
    double phi = 0;
    double tau = 0;
    std::int64_t n = 0;
    std::int64_t t = 0;
    std::int64_t d = 0;
    FreeParams params;

    bool ok() const {
        return status == Status::done;
    }
};

struct MinimizeOptions {
    std::optional<double> fixed_tau;
    int starts = 64;
    int max_iterations = 4000;
    double initial_step = 0.05;  // relative to each coordinate's range
    double min_step = 1e-10;
    std::int64_t n_ceiling = 10'000'000;
    /// Called with every evaluated feasible point and its log bound.
    std::function<void(const FreeParams &, double)> trace;
};

namespace detail {

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double result = 0;
    double f = 1.0 / static_cast<double>(base);
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= static_cast<double>(base);
    }
    return result;
}

/// Maps a point of the open unit cube into the feasible region:
/// eps2 keeps (1/k - eps2) r above p_max, then psi + eps1 stays below the
/// level that keeps Phi above p_max.
inline FreeParams map_unit_point(const std::array<double, 5> &u, const BoundInputs &in, double tau) {
    const double r = in.ratio();
    const double k = in.k;
    FreeParams x;
    x.tau = tau;
    x.eps2 = u[3] * (1 / k - in.p_max / r);
    const double floor_gap = in.p_max / (1 / k - x.eps2);
    const double budget = r - floor_gap;
    x.psi = u[1] * budget;
    x.eps1 = u[2] * std::min(0.5 - x.psi, budget - x.psi);
    x.eps3 = u[4] * x.psi;
    return x;
}

class Search {
   public:
    Search(const BoundInputs &in, double n, const MinimizeOptions &opt)
        : in_(in), n_(n), opt_(opt) {
        const double r = in.ratio();
        scale_ = {1.0, r, 0.5, 1.0 / in.k, r};
        build_directions();
    }

    double objective(const FreeParams &x) const {
        if (!is_feasible(x, in_)) {
            return std::numeric_limits<double>::infinity();
        }
        const double value = bound_terms_unchecked(x, in_, n_).log_total;
        if (opt_.trace) {
            opt_.trace(x, value);
        }
        return value;
    }

    /// Pattern search over axis and pairwise-diagonal directions.
    std::pair<FreeParams, double> polish(FreeParams x) const {
        double fx = objective(x);
        if (!std::isfinite(fx)) {
            return {x, fx};
        }
        double h = opt_.initial_step;
        for (int it = 0; it < opt_.max_iterations && h > opt_.min_step; ++it) {
            FreeParams best = x;
            double best_f = fx;
            for (const auto &dir : directions_) {
                FreeParams y = step(x, dir, h);
                double fy = objective(y);
                if (fy < best_f) {
                    best_f = fy;
                    best = y;
                }
            }
            if (best_f < fx) {
                x = best;
                fx = best_f;
                h = std::min(h * 2, 0.25);
            } else {
                h *= 0.5;
            }
        }
        return {x, fx};
    }

   private:
    // Coordinates: 0 tau, 1 psi, 2 eps1, 3 eps2, 4 eps3.
    static double &coord(FreeParams &x, int i) {
        switch (i) {
            case 0: return x.tau;
            case 1: return x.psi;
            case 2: return x.eps1;
            case 3: return x.eps2;
            default: return x.eps3;
        }
    }

    FreeParams step(FreeParams x, const std::array<int, 5> &dir, double h) const {
        for (int i = 0; i < 5; ++i) {
            if (dir[i] != 0) {
                coord(x, i) += dir[i] * h * scale_[i];
            }
        }
        return x;
    }

    void build_directions() {
        const int first = opt_.fixed_tau ? 1 : 0;
        for (int i = first; i < 5; ++i) {
            for (int si : {1, -1}) {
                std::array<int, 5> d{};
                d[i] = si;
                directions_.push_back(d);
            }
        }
        for (int i = first; i < 5; ++i) {
            for (int j = i + 1; j < 5; ++j) {
                for (int si : {1, -1}) {
                    for (int sj : {1, -1}) {
                        std::array<int, 5> d{};
                        d[i] = si;
                        d[j] = sj;
                        directions_.push_back(d);
                    }
                }
            }
        }
    }

    BoundInputs in_;
    double n_;
    const MinimizeOptions &opt_;
    std::array<double, 5> scale_{};
    std::vector<std::array<int, 5>> directions_;
};

inline bool lexicographically_less(const FreeParams &a, const FreeParams &b) {
    return std::tie(a.tau, a.psi, a.eps1, a.eps2, a.eps3) < std::tie(b.tau, b.psi, b.eps1, b.eps2, b.eps3);
}

inline EstimationResult fill_result(const FreeParams &x, const BoundInputs &in, std::int64_t n) {
    EstimationResult res;
    const BoundTerms t = bound_terms_unchecked(x, in, static_cast<double>(n));
    res.status = Status::done;
    res.params = x;
    res.eps_ver = t.ver();
    res.eps_rej = t.rej();
    res.eps_max = res.eps_ver + res.eps_rej;
    res.branch1 = t.branch1();
    res.branch2 = t.branch2();
    res.phi = phi_of(x, in);
    res.tau = x.tau;
    res.n = n;
    res.t = std::llround(x.tau * static_cast<double>(n));
    res.d = std::llround((1 - x.tau) * static_cast<double>(n));
    return res;
}

}  // namespace detail

/// True when p_max < r/k, i.e. some parameter point can be feasible.
inline bool threshold_condition_holds(const BoundInputs &in) {
    return in.p_max < in.ratio() / in.k;
}

/// Mode B: smallest bound reachable with n rounds. Points in `warm_starts`
/// join the multi-start set, so passing the optimum for a smaller n makes
/// the result non-increasing in n.
inline EstimationResult minimize_eps_given_n(const BoundInputs &in, std::int64_t n,
                                             const MinimizeOptions &opt = {},
                                             const std::vector<FreeParams> &warm_starts = {}) {
    in.validate();
    if (n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (opt.fixed_tau && !(*opt.fixed_tau > 0 && *opt.fixed_tau < 1)) {
        throw std::invalid_argument("fixed tau must lie in (0, 1)");
    }
    EstimationResult res;
    res.n = n;
    if (!threshold_condition_holds(in)) {
        res.reason = "p_max >= r/k";
        return res;
    }
    detail::Search search(in, static_cast<double>(n), opt);
    std::vector<FreeParams> starts;
    constexpr std::array<std::uint64_t, 5> kBases = {2, 3, 5, 7, 11};
    for (int s = 0; s < opt.starts; ++s) {
        std::array<double, 5> u{};
        for (int i = 0; i < 5; ++i) {
            u[i] = detail::radical_inverse(static_cast<std::uint64_t>(s) + 1, kBases[i]);
        }
        const double tau = opt.fixed_tau ? *opt.fixed_tau : u[0];
        starts.push_back(detail::map_unit_point(u, in, tau));
    }
    for (FreeParams w : warm_starts) {
        if (opt.fixed_tau) {
            w.tau = *opt.fixed_tau;
        }
        starts.push_back(w);
    }
    std::optional<FreeParams> best;
    double best_f = std::numeric_limits<double>::infinity();
    for (const FreeParams &start : starts) {
        auto [x, fx] = search.polish(start);
        if (!std::isfinite(fx)) {
            continue;
        }
        if (fx < best_f || (fx == best_f && best && detail::lexicographically_less(x, *best))) {
            best = x;
            best_f = fx;
        }
    }
    if (!best || !feasible(*best, in).empty()) {
        res.reason = "no feasible point";
        return res;
    }
    res = detail::fill_result(*best, in, n);
    if (!(res.eps_max < 0.5)) {
        res.status = Status::abort;
        res.reason = "eps_max >= 1/2";
    }
    return res;
}

/// Mode A: smallest n whose optimised bound is at most eps_target.
/// Exponential bracketing followed by integer bisection.
inline EstimationResult minimize_n_given_eps(const BoundInputs &in, double eps_target,
                                             const MinimizeOptions &opt = {}) {
    in.validate();
    if (!(eps_target > 0 && eps_target < 0.5)) {
        throw std::invalid_argument("eps_target must lie in (0, 1/2)");
    }
    EstimationResult res;
    if (!threshold_condition_holds(in)) {
        res.reason = "p_max >= r/k";
        return res;
    }
    auto meets = [&](std::int64_t n, EstimationResult &out) {
        out = minimize_eps_given_n(in, n, opt);
        return out.ok() && out.eps_max <= eps_target;
    };
    std::int64_t lo = 0;  // fails (or untested)
    std::int64_t hi = 16;
    EstimationResult at_hi;
    while (!meets(hi, at_hi)) {
        if (at_hi.reason == "no feasible point") {
            return at_hi;
        }
        lo = hi;
        if (hi >= opt.n_ceiling) {
            res.reason = "n ceiling exceeded";
            res.n = hi;
            return res;
        }
        hi = std::min(hi * 2, opt.n_ceiling);
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        EstimationResult at_mid;
        if (meets(mid, at_mid)) {
            hi = mid;
            at_hi = at_mid;
        } else {
            lo = mid;
        }
    }
    return at_hi;
}

inline void to_json(nlohmann::json &j, const EstimationResult &r) {
    j = nlohmann::json{{"status", r.ok() ? "Done" : "Abort"},
                       {"eps_max", r.eps_max},
                       {"eps_ver", r.eps_ver},
                       {"eps_rej", r.eps_rej},
                       {"branch1", r.branch1},
                       {"branch2", r.branch2},
                       {"phi", r.phi},
                       {"tau", r.tau},
                       {"n", r.n},
                       {"t", r.t},
                       {"d", r.d},
                       {"params", r.params}};
    if (!r.ok()) {
        j["reason"] = r.reason;
    }
}

}  // namespace vbem::estimate

#endif
