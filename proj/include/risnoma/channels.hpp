// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISNOMA_CHANNELS_HPP
#define RISNOMA_CHANNELS_HPP

#include <string_view>

// SNR distributions of the three BS->UAV link types.
//
// Amplitude conventions: the direct amplitude is g^d = amp_d * G_d with G_d
// Nakagami(m3, Omega3); the RIS-only amplitude is g^r = amp_r * S with
// S = sum_{i=1..N} G_i^g G_i^a after optimal phase alignment. With
// gbar_c = P_t / P_N the average SNRs are gbar_d = gbar_c amp_d^2 and
// gbar_r = gbar_c amp_r^2, and the composite SNR is gbar_c (g^r + g^d)^2.
namespace risnoma
{

struct NakagamiParams
{
    double m = 1.0;
    double omega = 1.0;

    /// Throws DomainError unless m >= 0.5 and omega > 0.
    void validate() const;
};

struct RisLinkParams
{
    NakagamiParams hop_g2r;
    NakagamiParams hop_r2a;
    /// Reflecting elements assigned to this link. Zero is accepted only by the
    /// composite functions, where it means "no RIS path".
    int n_elements = 1;
    double amp_g2r = 1.0;
    double amp_r2a = 1.0;

    double amp() const { return amp_g2r * amp_r2a; }
};

/// Gamma (first Laguerre term) fit of the element sum S: shape a, scale b.
struct LaguerreFit
{
    double a = 0.0;
    double b = 0.0;
    double mean_sum = 0.0;
    double var_sum = 0.0;
};

struct LinkBudget
{
    double gamma_bar_r = 0.0;
    double gamma_bar_d = 0.0;
    double gamma_bar_c = 0.0;
    double amp_direct = 0.0;
};

/// Budget from the transmit SNR P_t / P_N and the two large-scale amplitudes.
LinkBudget make_link_budget(double tx_snr, double amp_direct, double amp_ris);

/// Density of the per-element product G^g G^a (double Nakagami-m), x > 0.
double double_nakagami_pdf(const NakagamiParams &p1, const NakagamiParams &p2, double x);

/// E[(G^g G^a)^n] = prod_j Gamma(m_j + n/2) / Gamma(m_j) (Omega_j / m_j)^(n/2).
double double_nakagami_moment(const NakagamiParams &p1, const NakagamiParams &p2, int n);

/// Moment-matched gamma fit of the N-element sum. Requires n_elements >= 1.
LaguerreFit fit_laguerre(const RisLinkParams &ris);

/// RIS-only SNR density.
double ris_snr_pdf(const LaguerreFit &fit, double gamma_bar_r, double gamma);

/// RIS-only SNR CDF: P(a, sqrt(gamma / (gbar_r b^2))).
double ris_snr_cdf(const LaguerreFit &fit, double gamma_bar_r, double gamma);

/// Truncated-normal approximation of the RIS-only CDF,
/// 1 - Q((sqrt(gamma/gbar_r) - E[S]) / sigma) / Q(-sqrt(a)), before clamping.
double ris_snr_cdf_q_approx_raw(const LaguerreFit &fit, double gamma_bar_r, double gamma);

/// As above, clamped to [0, 1].
double ris_snr_cdf_q_approx(const LaguerreFit &fit, double gamma_bar_r, double gamma);

/// Direct-link SNR CDF: P(m3, m3 gamma / (Omega3 gbar_d)).
double direct_snr_cdf(const NakagamiParams &p, double gamma_bar_d, double gamma);

/// Direct-link SNR density.
double direct_snr_pdf(const NakagamiParams &p, double gamma_bar_d, double gamma);

enum class RisCdfModel
{
    laguerre, ///< gamma fit of the element sum
    q_approx, ///< truncated-normal approximation used by the closed form
};

struct QuadratureValue
{
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Composite SNR CDF by adaptive quadrature of the amplitude-domain convolution
///   F_c(gamma) = int_0^s F_{g^r}(s - x) f_{g^d}(x) dx,   s = sqrt(gamma / gbar_c).
/// n_elements == 0 reduces exactly to the direct CDF. Throws QuadratureError when
/// the estimated absolute error exceeds 1e-9.
QuadratureValue composite_snr_cdf_quadrature_detail(const RisLinkParams &ris, const NakagamiParams &direct,
                                                    const LinkBudget &budget, double gamma,
                                                    RisCdfModel model = RisCdfModel::laguerre);

double composite_snr_cdf_quadrature(const RisLinkParams &ris, const NakagamiParams &direct, const LinkBudget &budget,
                                    double gamma, RisCdfModel model = RisCdfModel::laguerre);

struct ClosedFormValue
{
    double value = 0.0; ///< clamped to [0, 1]
    double raw = 0.0;   ///< before clamping
    bool mean_above = false; ///< E[S] > sqrt(gamma / gbar_r) branch
};

/// Closed-form composite CDF built on the truncated-normal RIS approximation and
/// the psi(p1, p2, c) Gaussian-moment sums. The direct shape m3 must be a
/// half-integer (2 m3 integral within 1e-6); see round_to_half_integer().
ClosedFormValue composite_snr_cdf_closed_detail(const RisLinkParams &ris, const NakagamiParams &direct,
                                                const LinkBudget &budget, double gamma);

double composite_snr_cdf_closed(const RisLinkParams &ris, const NakagamiParams &direct, const LinkBudget &budget,
                                double gamma);

/// Nearest value with 2m integral, never below 0.5.
double round_to_half_integer(double m);

enum class LinkType
{
    direct,
    ris_only,
    composite,
};

std::string_view to_string(LinkType t);

enum class CompositeMethod
{
    closed_form,
    quadrature,
};

std::string_view to_string(CompositeMethod m);

/// A fully resolved link whose SNR distribution can be evaluated or sampled.
struct Link
{
    LinkType type = LinkType::direct;
    NakagamiParams direct;
    RisLinkParams ris;
    LinkBudget budget;
};

/// SNR CDF of `link`. With CompositeMethod::closed_form the direct shape is
/// rounded to a half-integer for both the direct and the composite link, so the
/// composite curve at N = 0 coincides with the direct one. The RIS-only link
/// always uses the gamma fit. A RIS-only link with zero elements never exceeds
/// zero SNR (CDF = 1 for gamma >= 0).
double link_snr_cdf(const Link &link, double gamma, CompositeMethod method);

} // namespace risnoma

#endif
