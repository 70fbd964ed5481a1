// Copyright 2026 The ghzqkd Authors
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

#pragma once

// Test-only reference: builds full operator matrices on A (x) T (x) B (x) E with Eigen and
// applies them by matrix-vector products. Shares no code with the in-place statevector
// kernels it is used to check.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "ghzqkd/adversary.hpp"

namespace ghzqkd::dense {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using C = std::complex<double>;

// Wire order A=0, T=1, B=2; index = ((a*2 + t)*2 + b)*d + e
inline size_t index(int a, int t, int b, size_t e, size_t d) { return ((a * 2 + t) * 2 + b) * d + e; }

inline Vec ghz(size_t d, const ProbeVector& probe) {
    Vec v = Vec::Zero(8 * d);
    const double r = 1.0 / std::sqrt(2.0);
    for (size_t e = 0; e < d; ++e) {
        v(index(0, 0, 0, e, d)) = r * (d == 1 ? C(1.0) : probe[e]);
        v(index(1, 1, 1, e, d)) = r * (d == 1 ? C(1.0) : probe[e]);
    }
    return v;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Mat hadamard() {
    Mat h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    return h;
}

inline Mat id(Eigen::Index n) { return Mat::Identity(n, n); }

/// Single-qubit operator on wire w (0=A,1=T,2=B), identity elsewhere incl. the probe.
inline Mat on_wire(const Mat& g, int w, size_t d) {
    Mat m = w == 0 ? g : id(2);
    m = kron(m, w == 1 ? g : id(2));
    m = kron(m, w == 2 ? g : id(2));
    return kron(m, id(static_cast<Eigen::Index>(d)));
}

/// Attack map on (wire w, E): maps |q>|e> to the isometry outputs, with |e> = initial probe.
/// Built as sum_q |out_q><q, e| on (w, E), tensored with identity on the other wires.
inline Mat attack_on_wire(const AttackParams& p, int w) {
    const size_t d = p.probe_dim();
    Mat local = Mat::Zero(2 * d, 2 * d);
    Vec ket_e(d);
    for (size_t e = 0; e < d; ++e) ket_e(e) = p.initial_probe[e];
    Vec out0 = Vec::Zero(2 * d), out1 = Vec::Zero(2 * d);
    for (size_t e = 0; e < d; ++e) {
        out0(e) = p.alpha * p.e00[e];
        out0(d + e) = p.beta * p.e01[e];
        out1(e) = p.beta_prime * p.e10[e];
        out1(d + e) = p.alpha_prime * p.e11[e];
    }
    Vec in0 = Vec::Zero(2 * d), in1 = Vec::Zero(2 * d);
    in0.head(d) = ket_e;
    in1.tail(d) = ket_e;
    local = out0 * in0.adjoint() + out1 * in1.adjoint();

    Mat full = Mat::Zero(8 * d, 8 * d);
    for (int a = 0; a < 2; ++a)
        for (int t = 0; t < 2; ++t)
            for (int b = 0; b < 2; ++b)
                for (size_t e = 0; e < d; ++e)
                    for (int a2 = 0; a2 < 2; ++a2)
                        for (int t2 = 0; t2 < 2; ++t2)
                            for (int b2 = 0; b2 < 2; ++b2)
                                for (size_t e2 = 0; e2 < d; ++e2) {
                                    const int q = w == 0 ? a : b, q2 = w == 0 ? a2 : b2;
                                    const bool others_equal = (w == 0) ? (t == t2 && b == b2) : (a == a2 && t == t2);
                                    if (!others_equal) continue;
                                    full(index(a2, t2, b2, e2, d), index(a, t, b, e, d)) = local(q2 * d + e2, q * d + e);
                                }
    return full;
}

/// Bell vector k (Phi+, Phi-, Psi+, Psi-) on (A, B) as a 4-vector indexed a*2+b.
inline Vec bell_vector(int k) {
    const double r = 1.0 / std::sqrt(2.0);
    Vec v = Vec::Zero(4);
    switch (k) {
        case 0: v << r, 0, 0, r; break;
        case 1: v << r, 0, 0, -r; break;
        case 2: v << 0, r, r, 0; break;
        default: v << 0, r, -r, 0; break;
    }
    return v;
}

/// Projector |bell_k><bell_k|_AB (x) |x_s><x_s|_T (x) I_E.
inline Mat bell_x_projector(int k, int s, size_t d) {
    const Vec bv = bell_vector(k);
    const double r = 1.0 / std::sqrt(2.0);
    Vec xv(2);
    xv << r, (s == 0 ? r : -r);
    Mat p = Mat::Zero(8 * d, 8 * d);
    for (int a = 0; a < 2; ++a)
        for (int t = 0; t < 2; ++t)
            for (int b = 0; b < 2; ++b)
                for (int a2 = 0; a2 < 2; ++a2)
                    for (int t2 = 0; t2 < 2; ++t2)
                        for (int b2 = 0; b2 < 2; ++b2)
                            for (size_t e = 0; e < d; ++e)
                                p(index(a2, t2, b2, e, d), index(a, t, b, e, d)) =
                                    bv(a2 * 2 + b2) * std::conj(bv(a * 2 + b)) * xv(t2) * std::conj(xv(t));
    return p;
}

/// Probability that z(A) != z(B).
inline double prob_a_ne_b(const Vec& v, size_t d) {
    double p = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int t = 0; t < 2; ++t)
            for (size_t e = 0; e < d; ++e) p += std::norm(v(index(a, t, 1 - a, e, d)));
    return p;
}

}  // namespace ghzqkd::dense
