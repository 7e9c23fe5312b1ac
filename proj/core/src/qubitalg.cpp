#include "qkdrate/qubitalg.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdrate {

op2 op2::identity() {
    op2 r;
    r.m[0][0] = 1.0;
    r.m[1][1] = 1.0;
    return r;
}

op2 op2::operator*(const op2& o) const {
    op2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
}

op2 op2::operator+(const op2& o) const {
    op2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
}

op2 op2::operator-() const { return scaled(-1.0); }

op2 op2::scaled(cplx s) const {
    op2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = s * m[i][j];
    return r;
}

op2 op2::adjoint() const {
    op2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = std::conj(m[j][i]);
    return r;
}

bool op2::is_unitary(double tol) const {
    op2 p = *this * adjoint();
    op2 id = identity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(p.m[i][j] - id.m[i][j]) > tol) return false;
    return true;
}

op2 pauli_x() {
    op2 r;
    r.m[0][1] = 1.0;
    r.m[1][0] = 1.0;
    return r;
}

op2 pauli_y() {
    op2 r;
    r.m[0][1] = cplx(0.0, -1.0);
    r.m[1][0] = cplx(0.0, 1.0);
    return r;
}

op2 pauli_z() {
    op2 r;
    r.m[0][0] = 1.0;
    r.m[1][1] = -1.0;
    return r;
}

std::size_t ket::num_qubits() const {
    std::size_t n = 0, d = 1;
    while (d < amps.size()) {
        d <<= 1;
        ++n;
    }
    if (d != amps.size())
        throw std::invalid_argument("ket: dimension is not a power of two");
    return n;
}

double ket::norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

ket& ket::normalize() {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("ket: cannot normalize zero vector");
    for (auto& a : amps) a /= n;
    return *this;
}

cplx inner(const ket& a, const ket& b) {
    if (a.amps.size() != b.amps.size())
        throw std::invalid_argument("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

ket apply_to_qubit(const op2& op, const ket& psi, std::size_t qubit) {
    const std::size_t n = psi.num_qubits();
    if (qubit >= n) throw std::invalid_argument("apply_to_qubit: qubit index out of range");
    // Qubit 0 is the most significant bit of the amplitude index.
    const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
    ket out;
    out.amps.assign(psi.amps.size(), 0.0);
    for (std::size_t i = 0; i < psi.amps.size(); ++i) {
        const int b = (i & bit) ? 1 : 0;
        const std::size_t i0 = i & ~bit, i1 = i | bit;
        out.amps[i0] += op.m[0][b] * psi.amps[i];
        out.amps[i1] += op.m[1][b] * psi.amps[i];
    }
    return out;
}

double sin_pi_8() {
    static const double v = std::sqrt(2.0 - std::sqrt(2.0)) / 2.0;
    return v;
}

double cos_pi_8() {
    static const double v = std::sqrt(2.0 + std::sqrt(2.0)) / 2.0;
    return v;
}

namespace {

// cos(pi/4) I - i sin(pi/4) (axis . sigma), a quarter turn about the axis.
op2 quarter_turn(double ax, double ay, double az) {
    const double h = std::sqrt(2.0) / 2.0; // cos(pi/4) = sin(pi/4)
    op2 axis = pauli_x().scaled(ax) + pauli_y().scaled(ay) + pauli_z().scaled(az);
    return op2::identity().scaled(h) + axis.scaled(cplx(0.0, -h));
}

} // namespace

rotation_set rotation_ops() {
    rotation_set s;
    s.R = quarter_turn(0.0, 1.0, 0.0);
    s.T0 = op2::identity();
    const double r = std::sqrt(2.0) / 2.0;
    s.T1 = quarter_turn(r, 0.0, r);  // (Z+X)/sqrt(2)
    s.T2 = quarter_turn(-r, 0.0, r); // (Z-X)/sqrt(2)
    return s;
}

op2 filter_op() {
    // |0x><0x| = [[1,1],[1,1]]/2, |1x><1x| = [[1,-1],[-1,1]]/2.
    const double s = sin_pi_8(), c = cos_pi_8();
    op2 f;
    f.m[0][0] = 0.5 * (s + c);
    f.m[0][1] = 0.5 * (s - c);
    f.m[1][0] = 0.5 * (s - c);
    f.m[1][1] = 0.5 * (s + c);
    return f;
}

namespace {

// |phi_0> and |phi_1> in the computational basis.
std::array<cplx, 2> phi_state(int which) {
    const double c = cos_pi_8(), s = sin_pi_8();
    const double r = std::sqrt(2.0) / 2.0;
    // |0x> = r(|0>+|1>), |1x> = r(-|0>+|1>)
    const double sgn = which == 0 ? 1.0 : -1.0;
    return {r * (c - sgn * s), r * (c + sgn * s)};
}

} // namespace

ket multiphoton_state(int nu) {
    if (nu < 1 || nu > 10)
        throw std::invalid_argument("multiphoton_state: nu must be in [1,10]");
    const auto phi0 = phi_state(0), phi1 = phi_state(1);
    const std::size_t dim = std::size_t{1} << (nu + 1);
    const std::size_t half = dim >> 1;
    ket psi;
    psi.amps.assign(dim, 0.0);
    const double w = std::sqrt(2.0) / 2.0; // 1/sqrt(2) normalization
    for (std::size_t r = 0; r < half; ++r) {
        cplx a0 = w, a1 = w;
        for (int q = 0; q < nu; ++q) {
            const int b = (r >> (nu - 1 - q)) & 1;
            a0 *= phi0[b];
            a1 *= phi1[b];
        }
        psi.amps[r] = a0;         // Alice |0>
        psi.amps[half + r] = a1;  // Alice |1>
    }
    return psi;
}

bell_basis bell_states() {
    const double r = std::sqrt(2.0) / 2.0;
    bell_basis b;
    b.psi_plus.amps = {0.0, r, r, 0.0};
    b.psi_minus.amps = {0.0, r, -r, 0.0};
    b.phi_plus.amps = {r, 0.0, 0.0, r};
    b.phi_minus.amps = {r, 0.0, 0.0, -r};
    return b;
}

namespace {

// Eigenvalues (descending) of a 2x2 Hermitian matrix [[a, b], [conj(b), d]].
std::array<double, 2> hermitian2_eigenvalues(double a, cplx b, double d) {
    const double mean = 0.5 * (a + d);
    const double delta = 0.5 * (a - d);
    const double disc = std::sqrt(delta * delta + std::norm(b));
    return {mean + disc, mean - disc};
}

} // namespace

std::array<double, 2> alice_reduced_eigenvalues(const ket& psi) {
    const std::size_t n = psi.num_qubits();
    if (n < 2) throw std::invalid_argument("alice_reduced_eigenvalues: need >= 2 qubits");
    const std::size_t half = psi.amps.size() >> 1;
    double r00 = 0.0, r11 = 0.0;
    cplx r01 = 0.0;
    for (std::size_t r = 0; r < half; ++r) {
        r00 += std::norm(psi.amps[r]);
        r11 += std::norm(psi.amps[half + r]);
        r01 += psi.amps[r] * std::conj(psi.amps[half + r]);
    }
    return hermitian2_eigenvalues(r00, r01, r11);
}

std::array<double, 2> schmidt_coefficients(const ket& psi) {
    auto ev = alice_reduced_eigenvalues(psi);
    return {std::sqrt(std::max(0.0, ev[0])), std::sqrt(std::max(0.0, ev[1]))};
}

double depolarizing_qber(depolarizing_protocol protocol, double D) {
    if (!(D >= 0.0 && D <= 1.0))
        throw std::invalid_argument("depolarizing_qber: D outside [0,1]");
    switch (protocol) {
    case depolarizing_protocol::bb84:
        return D;
    case depolarizing_protocol::sarg04:
        return D / (0.5 + D);
    }
    throw std::logic_error("depolarizing_qber: unreachable");
}

} // namespace qkdrate
