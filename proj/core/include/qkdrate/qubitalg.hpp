#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace qkdrate {

using cplx = std::complex<double>;

// 2x2 complex operator, row-major.
struct op2 {
    std::array<std::array<cplx, 2>, 2> m{};

    static op2 identity();
    op2 operator*(const op2& o) const;
    op2 operator+(const op2& o) const;
    op2 operator-() const;
    op2 scaled(cplx s) const;
    op2 adjoint() const;
    cplx trace() const { return m[0][0] + m[1][1]; }
    bool is_unitary(double tol) const;
};

op2 pauli_x();
op2 pauli_y();
op2 pauli_z();

// State over k qubits; amplitude index bits read qubit 0 as the most
// significant bit (qubit 0 = Alice throughout).
struct ket {
    std::vector<cplx> amps;

    std::size_t num_qubits() const;
    double norm() const;
    ket& normalize();
};

cplx inner(const ket& a, const ket& b);
ket apply_to_qubit(const op2& op, const ket& psi, std::size_t qubit);

// Exact constants used by the SARG04 state set, built from sqrt(2) via
// half-angle identities (no transcendental-library dependence).
double sin_pi_8();
double cos_pi_8();

struct rotation_set {
    op2 R;  // quarter turn about Y: cos(pi/4) I - i sin(pi/4) sigma_y
    op2 T0; // identity
    op2 T1; // quarter turn about (Z+X)/sqrt(2)
    op2 T2; // quarter turn about (Z-X)/sqrt(2)
};
rotation_set rotation_ops();

// F = sin(pi/8)|0x><0x| + cos(pi/8)|1x><1x| with |0x> = (|0>+|1>)/sqrt(2),
// |1x> = (-|0>+|1>)/sqrt(2).
op2 filter_op();

// |psi^(nu)> = (|0>|phi_0>^nu + |1>|phi_1>^nu)/sqrt(2), nu+1 qubits, with
// |phi_0/1> = cos(pi/8)|0x> +/- sin(pi/8)|1x>. nu in [1, 10].
ket multiphoton_state(int nu);

struct bell_basis {
    ket psi_plus;  // (|01> + |10>)/sqrt(2)
    ket psi_minus; // (|01> - |10>)/sqrt(2)
    ket phi_plus;  // (|00> + |11>)/sqrt(2)
    ket phi_minus; // (|00> - |11>)/sqrt(2)
};
bell_basis bell_states();

// Eigenvalues (descending) of Alice's reduced density operator, tracing
// out every qubit but qubit 0.
std::array<double, 2> alice_reduced_eigenvalues(const ket& psi);

// Schmidt coefficients (descending) of the qubit-0 vs rest bipartition;
// their squares are the reduced-density eigenvalues.
std::array<double, 2> schmidt_coefficients(const ket& psi);

enum class depolarizing_protocol { bb84, sarg04 };

// QBER through a depolarizing channel with disturbance D:
// BB84 -> D, SARG04 -> D/(1/2 + D).
double depolarizing_qber(depolarizing_protocol protocol, double D);

} // namespace qkdrate
