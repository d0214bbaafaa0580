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

#ifndef VBEM_SIM_STATEVECTOR_HPP
#define VBEM_SIM_STATEVECTOR_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbem/angle.hpp"
#include "vbem/rng.hpp"

namespace vbem::sim {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;
inline constexpr double kNormTolerance = 1e-10;

/// Pauli operator encoded as (x bit, z bit); Y = XZ up to phase.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline bool has_x(Pauli p) {
    return (static_cast<std::uint8_t>(p) & 1) != 0;
}
inline bool has_z(Pauli p) {
    return (static_cast<std::uint8_t>(p) & 2) != 0;
}
inline Pauli make_pauli(bool x, bool z) {
    return static_cast<Pauli>((x ? 1 : 0) | (z ? 2 : 0));
}
inline char pauli_label(Pauli p) {
    constexpr char labels[4] = {'I', 'X', 'Z', 'Y'};
    return labels[static_cast<std::uint8_t>(p)];
}

/// Result of measuring one qubit in the {|+_d>, |-_d>} basis.
/// Plain complex product. std::complex's operator* adds NaN recovery
/// that blocks vectorisation in the hot loops.
inline Complex cmul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

struct XyMeasurement {
    int reported = 0;  // outcome after the classical inversion
    int raw = 0;       // eigenstate the qubit collapsed to: 0 for |+_d>, 1 for |-_d>
    double probability = 1;  // probability of `reported`
};

/// Dense state vector over n qubits, qubit q is bit q of the basis index.
class StateVector {
   public:
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw std::out_of_range("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                                    std::to_string(kMaxQubits) + "]");
        }
        amps_.assign(std::size_t{1} << num_qubits, Complex{0, 0});
        amps_[0] = 1;
    }

    /// Tensor product of single-qubit states; locals[k] becomes qubit k.
    static StateVector product(std::span<const std::array<Complex, 2>> locals) {
        StateVector out;
        out.assign_product(locals);
        return out;
    }

    /// Rebuilds this state as a product state, reusing the allocation.
    void assign_product(std::span<const std::array<Complex, 2>> locals) {
        if (locals.empty() || locals.size() > static_cast<std::size_t>(kMaxQubits)) {
            throw std::out_of_range("product state qubit count outside supported range");
        }
        num_qubits_ = static_cast<int>(locals.size());
        amps_.resize(std::size_t{1} << num_qubits_);
        amps_[0] = 1;
        std::size_t size = 1;
        for (const auto &local : locals) {
            for (std::size_t i = 0; i < size; ++i) {
                amps_[i + size] = cmul(amps_[i], local[1]);
                amps_[i] = cmul(amps_[i], local[0]);
            }
            size <<= 1;
        }
    }

    int num_qubits() const {
        return num_qubits_;
    }
    std::size_t size() const {
        return amps_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amps_;
    }
    const Complex &operator[](std::size_t i) const {
        return amps_[i];
    }

    double norm_squared() const {
        double total = 0;
        for (const auto &a : amps_) {
            total += std::norm(a);
        }
        return total;
    }

    void apply_h(int q) {
        check_qubit(q);
        static constexpr double h = std::numbers::sqrt2 / 2;
        for_each_pair(q, [](Complex &a0, Complex &a1) {
            Complex t0 = a0;
            a0 = h * (t0 + a1);
            a1 = h * (t0 - a1);
        });
    }

    /// diag(1, e^{i angle}).
    void apply_rz(int q, double angle) {
        apply_phase(q, std::polar(1.0, angle));
    }
    void apply_rz(int q, Angle angle) {
        apply_phase(q, angle.phase());
    }

    void apply_cz(int a, int b) {
        check_qubit(a);
        check_qubit(b);
        if (a == b) {
            throw std::invalid_argument("CZ needs two distinct qubits");
        }
        const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & mask) == mask) {
                amps_[i] = -amps_[i];
            }
        }
    }

    void apply_x(int q) {
        check_qubit(q);
        for_each_pair(q, [](Complex &a0, Complex &a1) { std::swap(a0, a1); });
    }

    void apply_z(int q) {
        apply_phase(q, Complex{-1, 0});
    }

    /// Y = [[0, -i], [i, 0]].
    void apply_y(int q) {
        check_qubit(q);
        for_each_pair(q, [](Complex &a0, Complex &a1) {
            Complex t0 = a0;
            a0 = Complex{0, -1} * a1;
            a1 = Complex{0, 1} * t0;
        });
    }

    void apply_pauli(int q, Pauli p) {
        switch (p) {
            case Pauli::I:
                check_qubit(q);
                break;
            case Pauli::X:
                apply_x(q);
                break;
            case Pauli::Z:
                apply_z(q);
                break;
            case Pauli::Y:
                apply_y(q);
                break;
        }
    }

    /// Multiplies amplitude i by -1 wherever parity[i] is odd.
    void apply_parity_signs(std::span<const std::uint8_t> parity) {
        if (parity.size() != amps_.size()) {
            throw std::invalid_argument("parity table size does not match the state");
        }
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (parity[i] & 1) {
                amps_[i] = -amps_[i];
            }
        }
    }

    double probability_one(int q) const {
        check_qubit(q);
        const std::size_t bit = std::size_t{1} << q;
        double p = 0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                p += std::norm(amps_[i]);
            }
        }
        return p;
    }

    /// Computational-basis measurement driven by a uniform draw u in [0, 1):
    /// the outcome is 1 exactly when u < P(1).
    int measure_z(int q, double u) {
        const double p1 = probability_one(q);
        const int outcome = u < p1 ? 1 : 0;
        collapse(q, outcome, outcome ? p1 : 1 - p1);
        return outcome;
    }

    /// Born-rule measurement; consumes exactly one draw from rng.
    int measure_z(int q, Rng &rng) {
        return measure_z(q, uniform01(rng));
    }

    /// Measures qubit q in {|+_d>, |-_d>} and removes it from the
    /// register; higher qubits shift down by one.
    ///
    /// The reported outcome is raw XOR invert, and it is 1 exactly when
    /// u < P(reported = 1). This matches applying Rz(-d), H, an X when
    /// `invert` is set, then measure_z with the same draw.
    XyMeasurement measure_xy_and_drop(int q, Angle d, bool invert, double u) {
        check_qubit(q);
        const Complex c = (-d).phase();
        const std::size_t low = std::size_t{1} << q;
        const std::size_t half = amps_.size() / 2;
        // Index i of the reduced register splits as (high, low) around bit q.
        auto zero_index = [low](std::size_t i) { return ((i & ~(low - 1)) << 1) | (i & (low - 1)); };
        double n_plus = 0;
        double n_minus = 0;
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t i0 = zero_index(i);
            const Complex a1 = cmul(c, amps_[i0 + low]);
            n_plus += std::norm(amps_[i0] + a1);
            n_minus += std::norm(amps_[i0] - a1);
        }
        const double total = n_plus + n_minus;
        const double p_plus = n_plus / total;
        const double p_minus = 1 - p_plus;
        const double p_report_one = invert ? p_plus : p_minus;
        XyMeasurement result;
        result.reported = u < p_report_one ? 1 : 0;
        result.raw = result.reported ^ (invert ? 1 : 0);
        result.probability = result.reported ? p_report_one : 1 - p_report_one;
        const double norm = result.raw ? n_minus : n_plus;
        if (!(norm > 1e-300) || !(result.probability > 0)) {
            throw std::logic_error("measurement collapsed onto a zero-norm branch");
        }
        const double scale = 1 / std::sqrt(norm);
        const Complex cs = result.raw ? -c : c;
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t i0 = zero_index(i);
            amps_[i] = (amps_[i0] + cmul(cs, amps_[i0 + low])) * scale;
        }
        amps_.resize(half);
        --num_qubits_;
        return result;
    }

    /// Projects qubit q onto |+_d> (raw = 0) or |-_d> (raw = 1), drops it
    /// and renormalises. Returns the branch probability; a zero-probability
    /// branch leaves the state untouched and returns 0.
    double project_xy_and_drop(int q, Angle d, int raw) {
        check_qubit(q);
        const Complex c = (-d).phase();
        const Complex cs = raw ? -c : c;
        const std::size_t low = std::size_t{1} << q;
        const std::size_t half = amps_.size() / 2;
        auto zero_index = [low](std::size_t i) { return ((i & ~(low - 1)) << 1) | (i & (low - 1)); };
        double branch = 0;
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t i0 = zero_index(i);
            branch += std::norm(amps_[i0] + cmul(cs, amps_[i0 + low]));
        }
        const double probability = branch / (2 * norm_squared());
        if (!(probability > 1e-14)) {
            return 0;
        }
        const double scale = 1 / std::sqrt(branch);
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t i0 = zero_index(i);
            amps_[i] = (amps_[i0] + cmul(cs, amps_[i0 + low])) * scale;
        }
        amps_.resize(half);
        --num_qubits_;
        return probability;
    }

    XyMeasurement measure_xy_and_drop_lowest(Angle d, bool invert, double u) {
        return measure_xy_and_drop(0, d, invert, u);
    }

    /// Tensors a single-qubit state onto the register as its new highest qubit.
    void append_qubit(const std::array<Complex, 2> &local) {
        if (num_qubits_ >= kMaxQubits) {
            throw std::out_of_range("register already holds the maximum number of qubits");
        }
        const std::size_t size = amps_.size();
        amps_.resize(2 * size);
        for (std::size_t i = 0; i < size; ++i) {
            amps_[i + size] = cmul(amps_[i], local[1]);
            amps_[i] = cmul(amps_[i], local[0]);
        }
        ++num_qubits_;
    }

    /// Register with no qubits and amplitude 1, the start of append_qubit chains.
    static StateVector empty() {
        StateVector out;
        out.reset_to_empty();
        return out;
    }

    /// Drops every qubit, keeping the allocation.
    void reset_to_empty() {
        num_qubits_ = 0;
        amps_.assign(1, Complex{1, 0});
    }

   private:
    StateVector() = default;

    void check_qubit(int q) const {
        if (q < 0 || q >= num_qubits_) {
            throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                                    std::to_string(num_qubits_) + " qubits");
        }
    }

    template <typename F>
    void for_each_pair(int q, F body) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t base = 0; base < amps_.size(); base += 2 * bit) {
            for (std::size_t i = base; i < base + bit; ++i) {
                body(amps_[i], amps_[i + bit]);
            }
        }
    }

    void apply_phase(int q, Complex phase) {
        check_qubit(q);
        for_each_pair(q, [phase](Complex &, Complex &a1) { a1 = cmul(a1, phase); });
    }

    void collapse(int q, int outcome, double probability) {
        if (!(probability > 1e-300)) {
            throw std::logic_error("measurement collapsed onto a zero-norm branch");
        }
        const double scale = 1 / std::sqrt(probability);
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            const bool one = (i & bit) != 0;
            if (one == (outcome == 1)) {
                amps_[i] *= scale;
            } else {
                amps_[i] = 0;
            }
        }
    }

    int num_qubits_ = 0;
    std::vector<Complex> amps_;
};

inline StateVector new_state(int num_qubits) {
    return StateVector(num_qubits);
}

}  // namespace vbem::sim

#endif
