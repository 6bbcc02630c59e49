// Acceptance run on the desk-scale lattice h = 0.5, cutoff 1.5 (M = 123,
// kernel dimension 492). Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <unistd.h>

#include "bdf/checks.hpp"
#include "bdf/dynamics.hpp"
#include "bdf/io/snapshot.hpp"
#include "bdf/kernel_ops.hpp"

using namespace bdf;

namespace {

// Lattice and physical parameters.
constexpr double kSpacing = 0.5;
constexpr double kCutoff = 1.5;
constexpr double kSourceCharge = 1.0;
constexpr double kSourceWidth = 1.0;
constexpr double kAlphaCharged = 0.05;
constexpr double kAlphaVacuum = 0.1;

// Run lengths.
constexpr double kVacuumDt = 0.05;
constexpr std::int64_t kVacuumSteps = 1000;
constexpr double kChargedDt = 0.02;
constexpr std::int64_t kChargedSteps = 500;
constexpr double kEnergyWindow = 5.0;
constexpr std::int64_t kScfEvolveSteps = 200;
constexpr std::int64_t kResumeAt = 250;
constexpr std::int64_t kResumeSteps = 50;

// Sample counts.
constexpr int kVanishingSamples = 50;
constexpr int kProjectorSamples = 20;
constexpr int kGradientDirections = 10;
constexpr int kExchangeSamples = 10;
constexpr double kProjectorStrength = 0.3;
constexpr std::uint64_t kSeed = 20240917;

// Tolerances.
constexpr double kTolVacuum = 1e-12;
constexpr double kTolCharge = 1e-8;
constexpr double kTolCubic = 1e-8;
constexpr double kRatioLow = 3.5;
constexpr double kRatioHigh = 4.5;
constexpr double kTolDrift = 1e-6;           // times (1 + |E(Q_I)|)
constexpr double kTolIdempotence = 1e-10;
constexpr double kTolVanishing = 1e-12;
constexpr double kTolPineq = 1e-12;          // ratio <= 1 + tol
constexpr double kTolBlocks = 1e-10;
constexpr double kTolKinetic = 1e-9;         // relative
constexpr double kTolGradient = 1e-6;        // relative
constexpr double kTolExchange = 1e-12;       // relative
constexpr double kTolScfCommutator = 1e-9;
constexpr double kTolScfConserved = 1e-9;    // relative to max(1, |initial|)
constexpr double kCoercivitySlack = 0.05;
constexpr double kTolResume = 1e-12;
constexpr double kScfTol = 1e-11;

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s  criterion %2d  %-34s %s  [%.1f s]\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel_change(double now, double initial) { return std::abs(now - initial) / std::max(1.0, std::abs(initial)); }

void criterion_1(const LatticePtr& lat) {
  const auto start = Clock::now();
  const ExternalSource none = empty_source(lat, kAlphaVacuum);
  double worst = 0.0;
  run(make_state(vacuum_projector(lat)), kVacuumDt, kVacuumSteps, none, [&](const ObservableRecord& r) {
    worst = std::max({worst, std::abs(r.charge), std::abs(r.energy), std::abs(r.hs_norm_q),
                      std::abs(r.coulomb_norm_rho_minus_n), std::abs(r.idempotence_residual),
                      std::abs(r.commutator_norm)});
  });
  report(1, "free-vacuum stationarity", worst <= kTolVacuum, fmt("max |observable| = %.3e (tol %.0e)", worst, kTolVacuum),
         start);
}

struct ChargedRun {
  std::vector<ObservableRecord> records;
  EvolutionState initial;
  double initial_energy = 0.0;
  std::filesystem::path snapshot;
  ExternalSource source;
};

ChargedRun charged_run(const LatticePtr& lat) {
  ChargedRun out;
  out.source = build_gaussian_source(kSourceCharge, kSourceWidth, kAlphaCharged, lat);
  out.initial = build_initial_state(1, out.source, InitialOrbitals::free_orbitals);
  out.initial_energy = bdf_energy(out.initial.Q, out.source);
  out.snapshot = std::filesystem::temp_directory_path() /
                 ("bdf_acceptance_" + std::to_string(::getpid()) + ".bdfk");
  RunOptions opt;
  opt.on_step = [&](const EvolutionState& s) {
    if (s.step_index == kResumeAt) io::write_snapshot(s, out.snapshot);
  };
  run(out.initial, kChargedDt, kChargedSteps, out.source,
      [&](const ObservableRecord& r) { out.records.push_back(r); }, opt);
  return out;
}

void criterion_2(const ChargedRun& run, Clock::time_point start) {
  double charge = 0.0, cubic = 0.0;
  for (const auto& r : run.records) {
    charge = std::max(charge, std::abs(r.charge - 1.0));
    cubic = std::max(cubic, std::abs(r.cubic_trace - r.charge));
  }
  const bool ok = charge <= kTolCharge && cubic <= kTolCubic && run.records.size() == kChargedSteps + 1;
  report(2, "charge conservation", ok,
         fmt("max |charge - 1| = %.3e, max |tr Q^3 - charge| = %.3e (tol %.0e)", charge, cubic, kTolCharge), start);
}

void criterion_3(const ChargedRun& coarse, const LatticePtr& lat) {
  const auto start = Clock::now();
  // Max drift over [0, 5] at dt and dt/2, sampled at the same times.
  const auto window = static_cast<std::int64_t>(std::lround(kEnergyWindow / kChargedDt));
  double drift_coarse = 0.0;
  for (const auto& r : coarse.records) {
    if (r.step_index <= window) drift_coarse = std::max(drift_coarse, std::abs(r.energy - coarse.records[0].energy));
  }
  RunOptions opt;
  opt.record_interval = 2;
  double drift_fine = 0.0, e0 = 0.0;
  run(coarse.initial, 0.5 * kChargedDt, 2 * window, coarse.source,
      [&](const ObservableRecord& r) {
        if (r.step_index == 0) e0 = r.energy;
        drift_fine = std::max(drift_fine, std::abs(r.energy - e0));
      },
      opt);
  (void)lat;
  const double ratio = drift_coarse / drift_fine;
  const double limit = kTolDrift * (1.0 + std::abs(coarse.initial_energy));
  const bool ok = ratio >= kRatioLow && ratio <= kRatioHigh && drift_coarse <= limit;
  report(3, "energy conservation and order", ok,
         fmt("drift(dt) = %.3e (limit %.3e), drift ratio = %.3f", drift_coarse, limit, ratio), start);
}

void criterion_4(const ChargedRun& run, Clock::time_point start) {
  double worst = 0.0;
  for (const auto& r : run.records) worst = std::max(worst, r.idempotence_residual);
  report(4, "idempotence preservation", worst <= kTolIdempotence,
         fmt("max ||P^2 - P|| = %.3e (tol %.0e)", worst, kTolIdempotence), start);
}

void criterion_5(const LatticePtr& lat, checks::Rng& rng) {
  const auto start = Clock::now();
  checks::VanishingDensities worst;
  for (int n = 0; n < kVanishingSamples; ++n) {
    const KernelOperator q = checks::random_hermitian(lat, rng);
    const ChargeDensity rho = checks::random_density(lat, rng);
    const checks::VanishingDensities v = checks::vanishing_densities(q, rho);
    worst.phi_q = std::max(worst.phi_q, v.phi_q);
    worst.phi_p0 = std::max(worst.phi_p0, v.phi_p0);
    worst.exchange_q = std::max(worst.exchange_q, v.exchange_q);
  }
  const bool ok = worst.phi_q <= kTolVanishing && worst.phi_p0 <= kTolVanishing && worst.exchange_q <= kTolVanishing;
  report(5, "vanishing-density identities", ok,
         fmt("max |rho[phi,Q]| = %.3e, |rho[phi,P0]| = %.3e, |rho[R_Q,Q]| = %.3e", worst.phi_q, worst.phi_p0,
             worst.exchange_q),
         start);
}

void criterion_6(const LatticePtr& lat) {
  const auto start = Clock::now();
  const checks::PineqSweep s = checks::pineq_sweep(*lat);
  report(6, "Pineq sweep", s.max_ratio <= 1.0 + kTolPineq,
         fmt("max ratio = %.15f over %.0f pairs", s.max_ratio, static_cast<double>(s.pairs)), start);
}

void criterion_7(const LatticePtr& lat, checks::Rng& rng) {
  const auto start = Clock::now();
  double blocks = 0.0, kinetic = 0.0, lower = -INFINITY;
  for (int n = 0; n < kProjectorSamples; ++n) {
    const KernelOperator q = checks::random_projector_near_vacuum(lat, rng, kProjectorStrength) - vacuum_projector(lat);
    const checks::ProjectorIdentities id = checks::projector_identities(q);
    blocks = std::max(blocks, id.blocks_residual);
    kinetic = std::max(kinetic, id.kinetic_relative_error);
    lower = std::max(lower, id.hs_norm_sq - id.abs_kinetic);
  }
  const bool ok = blocks <= kTolBlocks && kinetic <= kTolKinetic && lower <= 0.0;
  report(7, "projector-difference identities", ok,
         fmt("blocks %.3e, kinetic rel %.3e, max(||Q||^2 - tr|D0|Q^2) = %.3e", blocks, kinetic, lower), start);
}

void criterion_8(const LatticePtr& lat, checks::Rng& rng) {
  const auto start = Clock::now();
  const ExternalSource src = build_gaussian_source(kSourceCharge, kSourceWidth, kAlphaCharged, lat);
  const KernelOperator q = checks::random_projector_near_vacuum(lat, rng, kProjectorStrength) - vacuum_projector(lat);
  double worst = 0.0;
  for (int n = 0; n < kGradientDirections; ++n) {
    worst = std::max(worst, checks::gradient_check(q, checks::random_hermitian(lat, rng), src).relative_error);
  }
  report(8, "energy gradient check", worst <= kTolGradient,
         fmt("max relative error = %.3e (tol %.0e)", worst, kTolGradient), start);
}

void criterion_9(const LatticePtr& lat, checks::Rng& rng) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int n = 0; n < kExchangeSamples; ++n) {
    worst = std::max(worst, checks::exchange_paths_relative_difference(checks::random_hermitian(lat, rng), kAlphaCharged));
  }
  report(9, "exchange oracle equivalence", worst <= kTolExchange,
         fmt("max relative difference = %.3e (tol %.0e)", worst, kTolExchange), start);
}

void criterion_10(const LatticePtr& lat) {
  const auto start = Clock::now();
  const ExternalSource src = build_gaussian_source(kSourceCharge, kSourceWidth, kAlphaCharged, lat);
  ScfSettings s;
  s.tol = kScfTol;
  const ScfResult r = scf_solve(src, s);
  double de = 0.0, dq = 0.0, e0 = 0.0, q0 = 0.0;
  if (r.converged) {
    run(make_state(r.P), kChargedDt, kScfEvolveSteps, src, [&](const ObservableRecord& rec) {
      if (rec.step_index == 0) {
        e0 = rec.energy;
        q0 = rec.charge;
      }
      de = std::max(de, rel_change(rec.energy, e0));
      dq = std::max(dq, rel_change(rec.charge, q0));
    });
  }
  const bool ok = r.converged && r.commutator_norm <= kTolScfCommutator && de <= kTolScfConserved &&
                  dq <= kTolScfConserved;
  report(10, "SCF stationarity handoff", ok,
         fmt("||[D,P]|| = %.3e, rel energy change %.3e, rel charge change %.3e", r.commutator_norm, de, dq), start);
}

void criterion_11(const ChargedRun& run, Clock::time_point start) {
  const double bound = coercivity_norm_bound(run.initial_energy, run.source);
  double worst = 0.0;
  for (const auto& r : run.records) worst = std::max(worst, r.hs_norm_q * r.hs_norm_q);
  report(11, "coercivity boundedness", worst <= (1.0 + kCoercivitySlack) * bound,
         fmt("max ||Q||^2 = %.6f, bound = %.6f", worst, bound), start);
}

void criterion_12(const ChargedRun& full, const LatticePtr& lat) {
  const auto start = Clock::now();
  double worst = INFINITY;
  try {
    const EvolutionState resumed = io::read_snapshot(full.snapshot, lat);
    std::vector<ObservableRecord> tail;
    run(resumed, kChargedDt, kResumeSteps, full.source, [&](const ObservableRecord& r) { tail.push_back(r); });
    worst = 0.0;
    for (const auto& r : tail) {
      const ObservableRecord& ref = full.records.at(static_cast<std::size_t>(r.step_index));
      for (const auto& [a, b] : {std::pair{r.t, ref.t}, {r.charge, ref.charge}, {r.energy, ref.energy},
                                {r.hs_norm_q, ref.hs_norm_q}, {r.coulomb_norm_rho_minus_n, ref.coulomb_norm_rho_minus_n},
                                {r.idempotence_residual, ref.idempotence_residual},
                                {r.commutator_norm, ref.commutator_norm}}) {
        worst = std::max(worst, std::abs(a - b));
      }
    }
  } catch (const std::exception& e) {
    std::printf("criterion 12: %s\n", e.what());
  }
  std::error_code ec;
  std::filesystem::remove(full.snapshot, ec);
  report(12, "persistence determinism", worst <= kTolResume,
         fmt("max |resumed - uninterrupted| = %.3e (tol %.0e)", worst, kTolResume), start);
}

}  // namespace

int main() {
  const LatticePtr lat = MomentumLattice::build(kSpacing, kCutoff);
  std::printf("acceptance lattice: h = %g, cutoff = %g, M = %zu, dimension = %zu\n", kSpacing, kCutoff, lat->size(),
              lat->spinor_dim());
  std::fflush(stdout);
  checks::Rng rng(kSeed);

  criterion_1(lat);
  const auto charged_start = Clock::now();
  const ChargedRun charged = charged_run(lat);
  criterion_2(charged, charged_start);
  criterion_3(charged, lat);
  criterion_4(charged, charged_start);
  criterion_5(lat, rng);
  criterion_6(lat);
  criterion_7(lat, rng);
  criterion_8(lat, rng);
  criterion_9(lat, rng);
  criterion_10(lat);
  criterion_11(charged, charged_start);
  criterion_12(charged, lat);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
