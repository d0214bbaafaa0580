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


#ifndef VBEM_ESTIMATE_BOUND_HPP
#define VBEM_ESTIMATE_BOUND_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vbem::estimate {

/// Fixed inputs of the local-correctness bound.
struct BoundInputs {
    int k = 2;
    double p = 0;      // inherent error of the decision problem, < 1/2
    double p_max = 0;  // upper bound on the test-round failure probability

    /// r = (2p - 1) / (2p - 2).
    double ratio() const {
        return (2 * p - 1) / (2 * p - 2);
    }
    void validate() const {
        if (k < 1) {
            throw std::invalid_argument("k must be positive");
        }
        if (!(p >= 0 && p < 0.5)) {
            throw std::invalid_argument("p must lie in [0, 1/2)");
        }
        if (!(p_max >= 0 && p_max < 1)) {
            throw std::invalid_argument("p_max must lie in [0, 1)");
        }
    }
};

struct FreeParams {
    double tau = 0;
    double psi = 0;
    double eps1 = 0;
    double eps2 = 0;
    double eps3 = 0;

    bool operator==(const FreeParams &) const = default;
};

inline double phi_of(const FreeParams &x, const BoundInputs &in) {
    return (1.0 / in.k - x.eps2) * (in.ratio() - x.psi - x.eps1);
}

inline double eps4_of(const FreeParams &x, const BoundInputs &in) {
    const double r = in.ratio();
    return (0.5 - r + x.psi - x.eps3) / (1 - r + x.psi - x.eps3) - in.p;
}

/// Every violated constraint, empty when feasible. All inequalities strict
/// except p_max >= 0.
inline std::vector<std::string> feasible(const FreeParams &x, const BoundInputs &in) {
    std::vector<std::string> out;
    const double r = in.ratio();
    const double k = in.k;
    if (!(x.tau > 0 && x.tau < 1)) out.push_back("0 < tau < 1");
    if (!(x.psi > 0 && x.psi < r)) out.push_back("0 < psi < r");
    if (!(x.eps1 > 0 && x.eps1 < 0.5 - x.psi)) out.push_back("0 < eps1 < 1/2 - psi");
    if (!(x.eps2 > 0 && x.eps2 < 1 / k)) out.push_back("0 < eps2 < 1/k");
    if (!(x.eps3 > 0 && x.eps3 < x.psi)) out.push_back("0 < eps3 < psi");
    if (!(eps4_of(x, in) > 0)) out.push_back("eps4 > 0");
    const double phi = phi_of(x, in);
    if (!(in.p_max >= 0)) out.push_back("p_max >= 0");
    if (!(in.p_max < phi)) out.push_back("p_max < Phi");
    if (!(phi < r / k)) out.push_back("Phi < r/k");
    return out;
}

/// Same constraints as `feasible`, without building messages.
inline bool is_feasible(const FreeParams &x, const BoundInputs &in) {
    const double r = in.ratio();
    const double phi = phi_of(x, in);
    return x.tau > 0 && x.tau < 1 && x.psi > 0 && x.psi < r && x.eps1 > 0 && x.eps1 < 0.5 - x.psi &&
           x.eps2 > 0 && x.eps2 < 1.0 / in.k && x.eps3 > 0 && x.eps3 < x.psi && eps4_of(x, in) > 0 &&
           in.p_max >= 0 && in.p_max < phi && phi < r / in.k;
}

/// log(e^a + e^b) without overflow or underflow.
inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

/// Bound components, each kept as a natural logarithm.
struct BoundTerms {
    double log_branch1 = 0;
    double log_branch2 = 0;
    double log_ver = 0;
    double log_rej = 0;
    double log_total = 0;

    double branch1() const { return std::exp(log_branch1); }
    double branch2() const { return std::exp(log_branch2); }
    double ver() const { return std::exp(log_ver); }
    double rej() const { return std::exp(log_rej); }
    double total() const { return std::exp(log_total); }
};

/// Evaluates the bound without checking feasibility.
inline BoundTerms bound_terms_unchecked(const FreeParams &x, const BoundInputs &in, double n) {
    const double r = in.ratio();
    const double delta = 1 - x.tau;
    const double e4 = eps4_of(x, in);
    BoundTerms t;
    t.log_branch1 = log_add(-2 * (1 - r + x.psi - x.eps3) * delta * e4 * e4 * n,
                            -2 * delta * delta * x.eps3 * x.eps3 * n / (r - x.psi));
    t.log_branch2 = log_add(-2 * (r - x.psi - x.eps1) * x.tau * x.eps2 * x.eps2 * n,
                            -2 * x.tau * x.tau * x.eps1 * x.eps1 * n / (r - x.psi));
    t.log_ver = std::max(t.log_branch1, t.log_branch2);
    const double gap = phi_of(x, in) - in.p_max;
    t.log_rej = -2 * gap * gap * x.tau * n;
    t.log_total = log_add(t.log_ver, t.log_rej);
    return t;
}

inline BoundTerms bound_terms(const FreeParams &x, const BoundInputs &in, double n) {
    auto violations = feasible(x, in);
    if (!violations.empty()) {
        throw std::invalid_argument("infeasible parameters: " + violations.front());
    }
    return bound_terms_unchecked(x, in, n);
}

inline double epsilon_ver(const FreeParams &x, const BoundInputs &in, double n) {
    return bound_terms(x, in, n).ver();
}

inline double epsilon_rej(const FreeParams &x, const BoundInputs &in, double n) {
    const double gap = phi_of(x, in) - in.p_max;
    if (!(gap > 0)) {
        throw std::invalid_argument("epsilon_rej needs Phi > p_max");
    }
    return std::exp(-2 * gap * gap * x.tau * n);
}

inline void to_json(nlohmann::json &j, const FreeParams &x) {
    j = nlohmann::json{{"tau", x.tau}, {"psi", x.psi}, {"eps1", x.eps1}, {"eps2", x.eps2}, {"eps3", x.eps3}};
}
inline void from_json(const nlohmann::json &j, FreeParams &x) {
    x.tau = j.at("tau").get<double>();
    x.psi = j.at("psi").get<double>();
    x.eps1 = j.at("eps1").get<double>();
    x.eps2 = j.at("eps2").get<double>();
    x.eps3 = j.at("eps3").get<double>();
}
inline void to_json(nlohmann::json &j, const BoundInputs &in) {
    j = nlohmann::json{{"k", in.k}, {"p", in.p}, {"p_max", in.p_max}};
}
inline void from_json(const nlohmann::json &j, BoundInputs &in) {
    in.k = j.at("k").get<int>();
    in.p = j.value("p", 0.0);
    in.p_max = j.at("p_max").get<double>();
}

}  // namespace vbem::estimate

#endif
