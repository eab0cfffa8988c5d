#include "pdc/qs_model.hpp"

#include <cmath>
#include <sstream>

#include "pdc/errors.hpp"
#include "pdc/fft.hpp"

namespace pdc {

using namespace std::complex_literals;

namespace {
constexpr double kSeriesLimit = 1e-3;

// cosh(G) and sinh(G)/G as functions of x = G^2, valid for either sign of x.
void cosh_sinhc(double x, double& ch, double& shc) {
  if (std::abs(x) < kSeriesLimit * kSeriesLimit) {
    ch = 0;
    shc = 0;
    double term_c = 1, term_s = 1;
    for (int n = 0; n < 6; ++n) {
      ch += term_c;
      shc += term_s;
      term_c *= x / ((2 * n + 1) * (2 * n + 2));
      term_s *= x / ((2 * n + 2) * (2 * n + 3));
    }
  } else if (x > 0) {
    const double gam = std::sqrt(x);
    ch = std::cosh(gam);
    shc = std::sinh(gam) / gam;
  } else {
    const double gam = std::sqrt(-x);
    ch = std::cos(gam);
    shc = std::sin(gam) / gam;
  }
}
}  // namespace

PwpGain pwp_gain(double g, double mismatch) {
  const double x = g * g - 0.25 * mismatch * mismatch;
  double ch, shc;
  cosh_sinhc(x, ch, shc);
  return {cplx(ch, 0.5 * mismatch * shc), cplx(g * shc, 0), x};
}

GainFunctions::GainFunctions(const SimGrid& grid, const Crystal& crystal, double g,
                             bool zero_mismatch)
    : g_(g) {
  if (!(g > 0)) throw DomainError("gain must be positive");
  const std::size_t n = grid.size();
  u_.resize(n);
  v_.resize(n);
  gamma_sq_.resize(n);
  mismatch_.resize(n);
  for (int ix = 0; ix < grid.nx(); ++ix) {
    for (int it = 0; it < grid.nt(); ++it) {
      const std::size_t i = grid.index(ix, it);
      mismatch_[i] = zero_mismatch ? 0.0 : crystal.phase_mismatch_pwp(grid.mode(ix, it));
      const PwpGain p = pwp_gain(g, mismatch_[i]);
      u_[i] = p.u;
      v_[i] = p.v;
      gamma_sq_[i] = p.gamma_sq;
    }
  }
}

double GainFunctions::total_v2() const {
  double s = 0;
  for (const cplx& v : v_) s += std::norm(v);
  return s;
}

double envelope_value(Envelope kind, double g, double a) {
  if (g < 1e-8) return kind == Envelope::corr ? a : a * a;
  if (kind == Envelope::corr) {
    // Large-g safe ratio sinh(2ga)/sinh(2g).
    if (2 * g > 30) return std::exp(2 * g * (a - 1)) * (1 - std::exp(-4 * g * a)) /
                          (1 - std::exp(-4 * g));
    return std::sinh(2 * g * a) / std::sinh(2 * g);
  }
  const double r = std::sinh(g * a) / std::sinh(g);
  return r * r;
}

PeakWidths peak_widths(double g, const PumpProfile& pump) {
  if (pump.chirped())
    throw UnsupportedPremise("width formulas assume a real symmetric (unchirped) pump");
  if (pump.plane_wave) throw UnsupportedPremise("width formulas need a finite pump");
  if (!(g > 0)) throw DomainError("gain must be positive");
  const double fc = std::sqrt(4 * g / std::tanh(2 * g));
  const double fh = std::sqrt(4 * g / std::tanh(g));
  return {fc / pump.waist_um, fc / pump.duration_fs, fh / pump.waist_um, fh / pump.duration_fs};
}

double narrowed_width(double g, double tau_p) {
  const double r = std::asinh(std::sinh(g) / std::sqrt(std::exp(1.0))) / g;
  return tau_p * std::sqrt(-std::log(r));
}

QsModel::QsModel(const SimGrid& grid, const Crystal& crystal, const PumpProfile& pump, double g,
                 QsOptions options)
    : grid_(grid), pump_(pump), gains_(grid, crystal, g, options.zero_mismatch),
      walkoff_(crystal.walkoff_constants()) {
  if (!options.zero_offset) {
    xm_ = 0.5 * walkoff_.l_woff_um;
    tm_ = 0.5 * walkoff_.tau_gvm_fs;
  }
  carrier_phase_ = crystal.kz({0, 0}, Wave::pump) * crystal.length_um();
  v2_per_pixel_ = gains_.total_v2() / static_cast<double>(grid.size());

  if (!pump.plane_wave) {
    std::ostringstream os;
    if (grid.dx() > 0.25 * pump.waist_um || grid.dt() > 0.25 * pump.duration_fs) {
      os << "direct pixel (" << grid.dx() << " um, " << grid.dt()
         << " fs) does not resolve the pump widths";
      warnings_.push_back(os.str());
    }
    if (grid.nx() * grid.dx() < 6 * pump.waist_um || grid.nt() * grid.dt() < 6 * pump.duration_fs)
      warnings_.push_back("grid window shorter than 6 pump widths; peaks will alias");
  }

  // Unshifted envelopes (with pump phase for corr), transformed, then shifted by xi_M.
  Fft2D fft(grid.nx(), grid.nt());
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (Envelope kind : {Envelope::corr, Envelope::coh}) {
    Field f(grid.size());
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int it = 0; it < grid.nt(); ++it) {
        const cplx a = pump.amplitude(grid.x(ix), grid.t(it));
        double val = envelope_value(kind, g, std::abs(a));
        cplx ph = 1.0;
        if (kind == Envelope::corr && std::abs(a) > 0) ph = a / std::abs(a);
        f[grid.index(ix, it)] = val * ph;
      }
    fft.forward(f.data());
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int it = 0; it < grid.nt(); ++it) {
        const double wxi = grid.q(ix) * xm_ - grid.omega(it) * tm_;
        f[grid.index(ix, it)] *= inv_n * std::exp(-1i * wxi);
      }
    (kind == Envelope::corr ? mu_corr_ : mu_coh_) = std::move(f);
  }
}

RealMap QsModel::envelope(Envelope kind) const {
  RealMap out(grid_.size());
  for (int ix = 0; ix < grid_.nx(); ++ix)
    for (int it = 0; it < grid_.nt(); ++it)
      out[grid_.index(ix, it)] = envelope_value(
          kind, gain(), pump_.magnitude(grid_.x(ix) - xm_, grid_.t(it) - tm_));
  return out;
}

Field QsModel::mu(Envelope kind) const {
  Field out = mu_disc(kind);
  const double inv = 1.0 / grid_.fourier_pixel();
  for (cplx& c : out) c *= inv;
  return out;
}

std::size_t QsModel::add(std::size_t a, std::size_t b, int sign) const {
  const int nt = grid_.nt(), nx = grid_.nx();
  const int ax = static_cast<int>(a / nt), at = static_cast<int>(a % nt);
  const int bx = static_cast<int>(b / nt), bt = static_cast<int>(b % nt);
  return grid_.index(SimGrid::wrap_index(ax + sign * bx, nx),
                     SimGrid::wrap_index(at + sign * bt, nt));
}

cplx QsModel::psi(std::size_t w1, std::size_t w2) const {
  return mu_corr_[add(w1, w2, +1)] * gains_.u()[w1] * gains_.v()[w1];
}

cplx QsModel::g1(std::size_t w1, std::size_t w2) const {
  return mu_coh_[add(w2, w1, -1)] * std::norm(gains_.v()[w1]);
}

double QsModel::intensity_covariance(std::size_t w1, std::size_t w2) const {
  return std::norm(g1(w1, w2)) + std::norm(psi(w1, w2));
}

double QsModel::mean_photons(double x, double t) const {
  return envelope_value(Envelope::coh, gain(), pump_.magnitude(x - xm_, t - tm_)) * v2_per_pixel_;
}

RealMap QsModel::mean_photon_distribution() const {
  RealMap out = envelope(Envelope::coh);
  for (double& v : out) v *= v2_per_pixel_;
  return out;
}

PeakWidths sampled_peak_widths(const QsModel& model) {
  const SimGrid& grid = model.grid();
  auto moments = [&](const Field& mu, double& wq, double& wo) {
    double s0 = 0, sq = 0, so = 0, sqq = 0, soo = 0;
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int it = 0; it < grid.nt(); ++it) {
        const double m = std::abs(mu[grid.index(ix, it)]);
        const double q = grid.q(ix), o = grid.omega(it);
        s0 += m;
        sq += m * q;
        so += m * o;
        sqq += m * q * q;
        soo += m * o * o;
      }
    wq = std::sqrt(sqq / s0 - (sq / s0) * (sq / s0));
    wo = std::sqrt(soo / s0 - (so / s0) * (so / s0));
  };
  PeakWidths w;
  moments(model.mu_disc(Envelope::corr), w.corr_q, w.corr_omega);
  moments(model.mu_disc(Envelope::coh), w.coh_q, w.coh_omega);
  return w;
}

ThinCrystalMoments thin_crystal_moments(const PumpProfile& pump, double g, double x1, double t1,
                                        double x2, double t2) {
  if (x1 != x2 || t1 != t2) return {};
  const cplx a = pump.amplitude(x1, t1);
  const double m = std::abs(a);
  const cplx ph = m > 0 ? a / m : cplx(1.0);
  const double s = std::sinh(g * m);
  return {0.5 * std::sinh(2 * g * m) * ph, s * s};
}

}  // namespace pdc
