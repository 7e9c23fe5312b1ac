#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qkdrate/decoy.hpp"
#include "qkdrate/infomath.hpp"
#include "qkdrate/profiles.hpp"

namespace qkdrate {

enum class protocol_id {
    simple,
    qc,
    bb84_wcp,
    bb84_spdc,
    bbm92_ideal,
    bbm92_spdc,
    bbm92_arbitrary,
    dpsk,
    sarg04_4,
    sarg04_6,
    mdi_sarg04_t1,
    mdi_sarg04_t2,
};

const char* protocol_name(protocol_id id);
std::optional<protocol_id> parse_protocol(const std::string& name);

// Which source parameters a protocol exposes to the optimizer.
bool protocol_uses_mu(protocol_id id);
bool protocol_uses_chi(protocol_id id);

enum class point_status { ok, degenerate };

struct rate_point {
    double L_km = 0.0;
    double transmittance = 0.0; // the engine's own channel convention
    double qber = 0.0;
    std::optional<double> mu;  // value used (fixed or optimized); absent if N/A
    std::optional<double> chi;
    double rate_per_pulse_raw = 0.0; // unclamped, may be negative
    double rate_per_pulse = 0.0;     // max(0, raw)
    double rate_bps = 0.0;           // pulse_rate * clamped rate
    point_status status = point_status::ok;
};

// ---- threshold-QBER protocol -------------------------------------------

// Q_B = p_noise/(p_signal + p_noise) with p_signal = mu eta_t eta and
// p_noise = (1 - eta_t eta) p_dark; eta_t carries no receiver loss here.
double simple_qber(const experiment_profile& p, double mu, double L_km);

// K = (p_signal + p_noise)(1 - Q_B/Q_t).
rate_point simple_rate(const experiment_profile& p, double mu, double q_threshold,
                       double L_km);

// ---- single-photon protocol with approximate EC/PA ---------------------

struct qc_ec_pa_model {
    // Fractions of the key consumed by error correction / privacy
    // amplification, both functions of the QBER.
    std::function<double(double)> ec_fraction;
    std::function<double(double)> pa_fraction;
};
qc_ec_pa_model default_qc_ec_pa(); // EC = 7Q/2 - Q log2 Q, PA = 1 + log2[(1+4Q-4Q^2)/2]

struct qc_options {
    // The published rate K = Q_B eta_t mu eta (1-EC)(1-PA) carries a
    // leading Q_B factor; dropping it is a non-default diagnostic.
    bool include_qber_prefactor = true;
};

rate_point qc_rate(const experiment_profile& p, double mu, double L_km,
                   const qc_ec_pa_model& model, const qc_options& opts = {});
rate_point qc_rate(const experiment_profile& p, double mu, double L_km);

// ---- BB84 ---------------------------------------------------------------

// Sifted click rate before distillation: 1 - e^(-mu eta_t eta), receiver
// loss folded into eta_t.
double bb84_wcp_raw_rate(const experiment_profile& p, double mu, double L_km);

// Distilled rate: Q = (1/2)[1 - (1-p_dark) e^(-mu eta_t eta)] with
// p_dark = n_D d_B, e_b = [e_0 (1 - e^(-mu eta_t eta)) + p_dark/2]/(2Q),
// K = Q[1 - h2(e_b)] - Q f_e(e_b) h2(e_b).
rate_point bb84_wcp_rate(const experiment_profile& p, double mu,
                         const ec_model& ec, double L_km);

// Heralded-pair variant: Alice keeps one arm (detector efficiency only),
// Bob's arm spans the full fiber plus receiver loss; pair count follows
// the SPDC geometric pmf.
rate_point bb84_spdc_rate(const experiment_profile& p, double chi,
                          const ec_model& ec, double L_km);

// ---- BBM92 --------------------------------------------------------------

struct bbm92_source {
    enum class kind { ideal_pair, spdc, arbitrary_mu };
    kind which = kind::ideal_pair;
    double chi = 0.1; // spdc only
    static bbm92_source ideal() { return {kind::ideal_pair, 0.0}; }
    static bbm92_source spdc(double chi) { return {kind::spdc, chi}; }
    // Poisson pair number with the distance rule mu(L) = 0.3*10^(-0.7 alpha L/10).
    static bbm92_source arbitrary() { return {kind::arbitrary_mu, 0.0}; }
};

struct bbm92_options {
    // The default arm model is eta_arm = eta * 10^(-alpha (L/2)/10); setting
    // this folds half the receiver loss into each arm as well.
    bool include_receiver_loss = false;
};

rate_point bbm92_rate(const experiment_profile& p, const bbm92_source& src,
                      const ec_model& ec, double L_km, const bbm92_options& opts = {});

// ---- DPSK ---------------------------------------------------------------

// Individual-attack collision bound s(e) = -log2(1 - e^2 - (1-6e)^2/2);
// outside its validity region the secure rate is 0.
double dpsk_secure_fraction(double e);

rate_point dpsk_rate(const experiment_profile& p, double mu, const ec_model& ec,
                     double L_km);

// ---- SARG04 with infinite decoy states ----------------------------------

struct sarg04_strategies {
    // e_p_n as a function of e_b_n; identity unless a better relation is
    // supplied.
    std::function<double(double)> phase_error_map;
    // Joint bit-and-phase flip probability a(e_b, e_p); independent product
    // by default, which collapses H(e_p|e_b) to h2(e_p).
    std::function<double(double, double)> joint_flip_probability;
};
sarg04_strategies default_sarg04_strategies();

// K = Q_0 + sum_{n=1,2} Q_n [1 - H(e_p_n | e_b_n)] - Q_mu f_e(E_mu) h2(E_mu).
rate_point sarg04_rate(sarg_variant variant, const experiment_profile& p,
                       double mu, const ec_model& ec, double L_km,
                       const sarg04_strategies& strategies);
rate_point sarg04_rate(sarg_variant variant, const experiment_profile& p,
                       double mu, const ec_model& ec, double L_km);

// ---- MDI SARG04 ----------------------------------------------------------

enum class mdi_event_type { type1, type2 };

struct mdi_gains {
    double joint_gains[2][2];  // Q^(m,n), photon numbers m,n in {1,2}
    double bit_errors[2][2];   // e_b^(m,n)
    double phase_errors[2][2]; // e_p^(m,n)
    double total_gain = 0.0;   // Q^tot over the modeled (m,n) set
    double total_error = 0.0;  // gain-weighted bit-error average
    mdi_event_type event_type = mdi_event_type::type1;
};

using mdi_gain_model = std::function<mdi_gains(
    mdi_event_type, const experiment_profile&, double mu, double L_km)>;

// Reconstructed relay model: eta_arm = eta * 10^(-alpha L/20); per-arm click
// 1 - (1 - A_m)(1 - d) with A_m = 1 - (1 - eta_arm)^m and d the relay dark
// count (profile override when present); Q^(m,n) = (1/2) P_mu(m) P_mu(n)
// click_A click_B; e_b = e_0 + (1/2)(dark fraction), e_p = e_b. The same
// model serves both event types.
mdi_gains default_mdi_gain_model(mdi_event_type type, const experiment_profile& p,
                                 double mu, double L_km);

struct mdi_options {
    // Diagnostic: keep the (2,2) term in the privacy-amplification sum
    // (it is always part of Q^tot / e^tot).
    bool include_22_in_pa = false;
};

rate_point mdi_sarg04_rate(mdi_event_type type, const experiment_profile& p,
                           double mu, const ec_model& ec, double L_km,
                           const mdi_gain_model& gain_model,
                           const mdi_options& opts = {});
rate_point mdi_sarg04_rate(mdi_event_type type, const experiment_profile& p,
                           double mu, const ec_model& ec, double L_km);

// ---- sweep driver --------------------------------------------------------

enum class optimize_vars { none, mu, chi, mu_chi };

struct sweep_request {
    protocol_id protocol = protocol_id::simple;
    experiment_profile profile;
    std::vector<double> grid; // strictly increasing L values, km
    optimize_vars optimize = optimize_vars::none;
    double mu = 0.1;
    double chi = 0.1;
    double q_threshold = 0.04; // simple protocol only
    ec_model ec = ec_model::cascade();
    int threads = 1; // results are identical for any value
};

// One rate_point per grid L, in grid order. Engine degeneracies mark the
// point rather than aborting. Optimized runs seed the search with the fixed
// parameter value, so they dominate fixed runs pointwise on raw rates.
std::vector<rate_point> sweep(const sweep_request& request);

// Evaluate one protocol point with fixed parameters (no optimization).
rate_point evaluate_point(const sweep_request& request, double L_km, double mu,
                          double chi);

} // namespace qkdrate
