// Copyright 2026 The protonpipe developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// protonpipe: NEO Hamiltonians -> ADAPT-VQE -> ADAPT-AQC -> noisy ZNE,
// with barrier heights, rate-constant ratios, and proton densities.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "protonpipe/adapt.hpp"
#include "protonpipe/analysis.hpp"
#include "protonpipe/aqc.hpp"
#include "protonpipe/errors.hpp"
#include "protonpipe/hamiltonian.hpp"
#include "protonpipe/noise.hpp"
#include "protonpipe/pipeline.hpp"
#include "protonpipe/transpile.hpp"
#include "protonpipe/zne.hpp"

namespace pp = protonpipe;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pp::ValidationError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw pp::ValidationError("cannot write file: " + path);
  out << content;
}

pp::PauliSum load_operator(const std::string& path) {
  const std::string text = slurp(path);
  if (text.find("&NEO") != std::string::npos) {
    std::istringstream in(text);
    return pp::assemble(pp::parse_integrals(in));
  }
  return pp::PauliSum::from_text(text);
}

std::set<std::size_t> parse_index_set(const std::vector<std::size_t>& v) {
  return {v.begin(), v.end()};
}

pp::ZneDataset collect_dataset(const pp::Circuit& circuit, const pp::PauliSum& h,
                               const pp::NoiseModel& nm,
                               const std::vector<double>& lambdas,
                               std::size_t replicates, std::size_t shots,
                               unsigned seed) {
  pp::ZneDataset dataset;
  dataset.lambdas = lambdas;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    std::vector<double> samples;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      const unsigned fold_seed =
          seed * 1000u + static_cast<unsigned>(li) * 100u + static_cast<unsigned>(rep);
      const pp::Circuit folded = pp::fold(circuit, lambdas[li], fold_seed);
      samples.push_back(shots == 0
                            ? pp::noisy_expectation(folded, h, nm)
                            : pp::noisy_expectation_sampled(folded, h, nm, shots,
                                                            fold_seed + 17u));
    }
    dataset.samples.push_back(std::move(samples));
  }
  return dataset;
}

pp::PauliSum remap_operator(const pp::PauliSum& h,
                            const std::vector<std::size_t>& layout,
                            std::size_t n_physical) {
  pp::PauliSum out(n_physical);
  for (const auto& [letters, coeff] : h.terms()) {
    std::string mapped(n_physical, 'I');
    for (std::size_t l = 0; l < letters.size(); ++l) mapped[layout[l]] = letters[l];
    out.add_term(mapped, coeff);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"protonpipe: proton-transfer quantum simulation pipeline"};
  app.require_subcommand(1);

  // ---- ham ------------------------------------------------------------------
  auto* ham = app.add_subcommand("ham", "assemble or interpolate Hamiltonians");
  ham->require_subcommand(1);
  auto* ham_assemble = ham->add_subcommand("assemble", "integrals -> qubit operator");
  std::string ha_integrals, ha_out;
  ham_assemble->add_option("--integrals", ha_integrals, "NEO-FCIDUMP file")
      ->required();
  ham_assemble->add_option("--out", ha_out, "operator text output (default stdout)");
  auto* ham_interp = ham->add_subcommand("interpolate", "alpha*H_L + beta*H_M + gamma*H_R");
  std::string hi_left, hi_middle, hi_right, hi_weights, hi_out;
  ham_interp->add_option("--left", hi_left, "Left operator or integral file")->required();
  ham_interp->add_option("--middle", hi_middle, "Middle operator or integral file")->required();
  ham_interp->add_option("--right", hi_right, "Right operator or integral file")->required();
  ham_interp->add_option("--weights", hi_weights, "a,b,c (normalized) or LMR label like 210")
      ->required();
  ham_interp->add_option("--out", hi_out, "operator text output (default stdout)");

  // ---- circ -----------------------------------------------------------------
  auto* circ = app.add_subcommand("circ", "circuit import/export, transpile, metrics");
  std::string ci_in, ci_out, ci_map;
  bool ci_metrics = false;
  circ->add_option("--in", ci_in, "circuit text file")->required();
  circ->add_option("--transpile", ci_map, "coupling spec, e.g. heavyhex:3 or line:4");
  circ->add_flag("--metrics", ci_metrics, "print 2Q count/depth");
  circ->add_option("--out", ci_out, "write the (transpiled) circuit here");

  // ---- exact ----------------------------------------------------------------
  auto* exact = app.add_subcommand("exact", "exact ground state of a Hamiltonian");
  std::string ex_ham, ex_out_state, ex_dump, ex_sector;
  exact->add_option("--ham", ex_ham, "NEO-FCIDUMP or operator text file")->required();
  exact->add_option("--sector", ex_sector, "n_electrons,n_protons restriction");
  exact->add_option("--out", ex_out_state, "write the ground state (binary)");
  exact->add_option("--dump-operator", ex_dump, "write the qubit operator text");

  // ---- adapt ----------------------------------------------------------------
  auto* adapt = app.add_subcommand("adapt", "ADAPT-VQE ground-state preparation");
  std::string ad_ham, ad_pool = "fermionic";
  double ad_threshold = 1e-3;
  unsigned ad_seed = 0;
  std::vector<std::size_t> ad_occ_e, ad_occ_p;
  std::vector<std::string> ad_out;
  adapt->add_option("--ham", ad_ham, "NEO-FCIDUMP file")->required();
  adapt->add_option("--pool", ad_pool, "fermionic|qubit");
  adapt->add_option("--threshold", ad_threshold, "energy error target in Ha");
  adapt->add_option("--occupied-e", ad_occ_e, "occupied electron spin orbitals")
      ->required();
  adapt->add_option("--occupied-p", ad_occ_p, "occupied proton spin orbitals")
      ->required();
  adapt->add_option("--seed", ad_seed, "driver seed");
  adapt->add_option("--out", ad_out, "state.json circuit.txt")
      ->expected(2)
      ->required();

  // ---- aqc ------------------------------------------------------------------
  auto* aqc_cmd = app.add_subcommand("aqc", "ADAPT-AQC circuit compression");
  std::string aq_target, aq_preset = "high", aq_coupling = "line:4";
  unsigned aq_seed = 0;
  std::size_t aq_budget = 60;
  std::vector<std::string> aq_out;
  aqc_cmd->add_option("--target", aq_target, "target state (binary dump)")->required();
  aqc_cmd->add_option("--preset", aq_preset, "high|low");
  aqc_cmd->add_option("--coupling", aq_coupling, "coupling spec");
  aqc_cmd->add_option("--budget", aq_budget, "block budget");
  aqc_cmd->add_option("--seed", aq_seed, "seed");
  aqc_cmd->add_option("--out", aq_out, "circuit.txt report.json")
      ->expected(2)
      ->required();

  // ---- noise ----------------------------------------------------------------
  auto* noise = app.add_subcommand("noise", "inspect a calibration file");
  std::string no_cal, no_map;
  noise->add_option("--cal", no_cal, "calibration JSON")->required();
  noise->add_option("--check-coupling", no_map, "report edges without cz entries");

  // ---- zne ------------------------------------------------------------------
  auto* zne = app.add_subcommand("zne", "zero-noise extrapolation");
  std::vector<std::string> zn_circuits, zn_hams;
  std::string zn_noise, zn_method = "fit-first", zn_out, zn_coupling;
  std::vector<double> zn_lambdas{1, 2, 3, 4};
  std::size_t zn_replicates = 100, zn_shots = 1000, zn_bootstrap = 1000;
  std::vector<std::size_t> zn_degrees{1, 2};
  unsigned zn_seed = 0;
  zne->add_option("--circuit", zn_circuits,
                  "circuit text file (twice: left then middle, for barriers)")
      ->expected(1, 2)
      ->required();
  zne->add_option("--ham", zn_hams, "Hamiltonian per circuit")
      ->expected(1, 2)
      ->required();
  zne->add_option("--noise", zn_noise, "calibration JSON")->required();
  zne->add_option("--coupling", zn_coupling,
                  "transpile circuits onto this map before simulating");
  zne->add_option("--lambdas", zn_lambdas, "noise scales");
  zne->add_option("--replicates", zn_replicates, "folded replicates per scale");
  zne->add_option("--shots", zn_shots, "shots per replicate (0 = exact mode)");
  zne->add_option("--method", zn_method, "fit-first|diff-first");
  zne->add_option("--degrees", zn_degrees, "candidate polynomial degrees");
  zne->add_option("--bootstrap", zn_bootstrap, "bootstrap replicates (0 = off)");
  zne->add_option("--seed", zn_seed, "seed");
  zne->add_option("--out", zn_out, "report JSON output");

  // ---- rate -----------------------------------------------------------------
  auto* rate = app.add_subcommand("rate", "TST rate-constant ratios");
  double ra_barrier_mha = 0.0, ra_tmin = 80.0, ra_tmax = 300.0;
  std::size_t ra_points = 12;
  double ra_sensitivity_mha = -1.0, ra_temperature = 120.0;
  std::string ra_out;
  rate->add_option("--barrier-mha", ra_barrier_mha, "barrier height in mHa")
      ->required();
  rate->add_option("--tmin", ra_tmin, "lowest temperature (K)");
  rate->add_option("--tmax", ra_tmax, "highest temperature (K)");
  rate->add_option("--points", ra_points, "temperature samples");
  rate->add_option("--sensitivity-mha", ra_sensitivity_mha,
                   "also report dk/k for this barrier error");
  rate->add_option("--temperature", ra_temperature, "temperature for --sensitivity-mha");
  rate->add_option("--out", ra_out, "CSV output (default stdout)");

  // ---- density --------------------------------------------------------------
  auto* density = app.add_subcommand("density", "proton density on a grid");
  std::string de_state, de_grid, de_out;
  std::size_t de_n_elec = 0, de_n_prot = 0;
  bool de_sum_spin = false;
  density->add_option("--state", de_state, "state binary dump")->required();
  density->add_option("--n-electron-modes", de_n_elec)->required();
  density->add_option("--n-proton-modes", de_n_prot)->required();
  density->add_option("--grid", de_grid, "orbital grid CSV")->required();
  density->add_flag("--sum-spin-pairs", de_sum_spin,
                    "pair spin orbitals (2P, 2P+1) into spatial orbitals");
  density->add_option("--out", de_out, "density CSV output")->required();

  // ---- pipeline ---------------------------------------------------------------
  auto* pipeline = app.add_subcommand("pipeline", "run the full workflow");
  std::string pi_config, pi_out;
  pipeline->add_option("--config", pi_config, "pipeline config JSON")->required();
  pipeline->add_option("--out", pi_out, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ham_assemble->parsed()) {
      std::istringstream in(slurp(ha_integrals));
      const pp::PauliSum h = pp::assemble(pp::parse_integrals(in));
      if (ha_out.empty()) {
        std::cout << h.to_text();
      } else {
        spill(ha_out, h.to_text());
      }
    } else if (ham_interp->parsed()) {
      const pp::PauliSum left = load_operator(hi_left);
      const pp::PauliSum middle = load_operator(hi_middle);
      const pp::PauliSum right = load_operator(hi_right);
      pp::LmrWeights weights(1, 0, 0);
      if (hi_weights.find(',') == std::string::npos) {
        weights = pp::LmrWeights::from_label(hi_weights);
      } else {
        double a = 0, b = 0, c = 0;
        if (std::sscanf(hi_weights.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
          throw pp::ValidationError("--weights expects a,b,c or a digit label");
        }
        weights = pp::LmrWeights(a, b, c);
      }
      const pp::PauliSum h = pp::interpolate(left, middle, right, weights);
      if (hi_out.empty()) {
        std::cout << h.to_text();
      } else {
        spill(hi_out, h.to_text());
      }
    } else if (circ->parsed()) {
      pp::Circuit c = pp::Circuit::from_text(slurp(ci_in));
      if (!ci_map.empty()) {
        const auto result = pp::transpile(c, pp::coupling_from_spec(ci_map));
        c = result.circuit;
        std::cout << "final_layout:";
        for (std::size_t p : result.final_layout) std::cout << " " << p;
        std::cout << "\n";
      }
      if (ci_metrics) {
        const auto m = pp::two_qubit_metrics(c);
        std::cout << "two_qubit_count " << m.count << "\n"
                  << "two_qubit_depth " << m.depth << "\n";
      }
      if (!ci_out.empty()) spill(ci_out, c.to_text());
    } else if (exact->parsed()) {
      const pp::PauliSum h = load_operator(ex_ham);
      std::optional<pp::SectorSpec> sector;
      if (!ex_sector.empty()) {
        std::size_t ne = 0, np = 0;
        if (std::sscanf(ex_sector.c_str(), "%zu,%zu", &ne, &np) != 2) {
          throw pp::ValidationError("--sector expects n_electrons,n_protons");
        }
        std::istringstream in(slurp(ex_ham));
        const pp::NeoIntegrals ints = pp::parse_integrals(in);
        sector = pp::SectorSpec{ints.layout, ne, np};
      }
      const pp::GroundState gs = pp::exact_ground_state(h, sector);
      std::printf("energy %.12f\n", gs.energy);
      if (!ex_out_state.empty()) pp::save_state(gs.state, ex_out_state);
      if (!ex_dump.empty()) spill(ex_dump, h.to_text());
    } else if (adapt->parsed()) {
      std::istringstream in(slurp(ad_ham));
      const pp::NeoIntegrals ints = pp::parse_integrals(in);
      const pp::PauliSum h = pp::assemble(ints);
      const auto occ_e = parse_index_set(ad_occ_e);
      const auto occ_p = parse_index_set(ad_occ_p);
      const auto pool = ad_pool == "qubit"
                            ? pp::make_qubit_pool(ints.layout, occ_e, occ_p)
                            : pp::make_fermionic_pool(ints.layout, occ_e, occ_p);
      const pp::StateVector ref = pp::reference_state(ints.layout, occ_e, occ_p);
      pp::AdaptOptions options;
      options.threshold = ad_threshold;
      options.seed = ad_seed;
      options.exact_energy =
          pp::exact_ground_state(h, pp::SectorSpec{ints.layout, occ_e.size(),
                                                   occ_p.size()})
              .energy;
      const pp::AdaptResult result = pp::adapt_vqe(h, pool, ref, options);
      spill(ad_out[0], result.state.to_json(pool) + "\n");
      spill(ad_out[1], result.circuit.to_text());
      std::printf("energy %.12f\nerror_vs_exact %.3e\niterations %zu\n",
                  result.energy, result.energy - *options.exact_energy,
                  result.state.selected.size());
    } else if (aqc_cmd->parsed()) {
      const pp::StateVector target = pp::load_state(aq_target);
      pp::AqcConfig cfg = pp::AqcConfig::preset(
          aq_preset, pp::coupling_from_spec(aq_coupling), aq_seed);
      cfg.block_budget = aq_budget;
      const pp::AqcResult result = pp::compile(target, cfg);
      spill(aq_out[0], result.circuit.to_text());
      nlohmann::json report;
      report["final_cost"] = result.final_cost;
      report["achieved_fidelity"] = result.achieved_fidelity;
      report["converged"] = result.converged;
      report["blocks"] = result.blocks.size();
      report["cost_history"] = result.cost_history;
      nlohmann::json pairs = nlohmann::json::array();
      for (const auto& [a, b] : result.chosen_pairs) pairs.push_back({a, b});
      report["chosen_pairs"] = pairs;
      spill(aq_out[1], report.dump(2) + "\n");
      std::printf("fidelity %.6f blocks %zu converged %d\n",
                  result.achieved_fidelity, result.blocks.size(),
                  static_cast<int>(result.converged));
    } else if (noise->parsed()) {
      const pp::NoiseModel nm = pp::NoiseModel::from_file(no_cal);
      std::printf("qubits %zu\neplg18 %.6g\ntimestamp %s\n", nm.n_qubits(),
                  nm.eplg18(), nm.timestamp().c_str());
      if (!no_map.empty()) {
        const auto map = pp::coupling_from_spec(no_map);
        const auto missing = nm.missing_edges(map.edges(), "cz");
        std::printf("missing cz calibration for %zu edge(s)\n", missing.size());
        for (const auto& [a, b] : missing) {
          std::printf("  (%zu, %zu)\n", a, b);
        }
      }
    } else if (zne->parsed()) {
      if (zn_circuits.size() != zn_hams.size()) {
        throw pp::ValidationError("--circuit and --ham counts must match");
      }
      const pp::NoiseModel nm = pp::NoiseModel::from_file(zn_noise);
      const std::set<std::size_t> degrees(zn_degrees.begin(), zn_degrees.end());
      std::vector<pp::ZneDataset> datasets;
      for (std::size_t k = 0; k < zn_circuits.size(); ++k) {
        pp::Circuit c = pp::Circuit::from_text(slurp(zn_circuits[k]));
        pp::PauliSum h = load_operator(zn_hams[k]);
        if (!zn_coupling.empty()) {
          const auto map = pp::coupling_from_spec(zn_coupling);
          const auto transpiled = pp::transpile(c, map);
          h = remap_operator(h, transpiled.final_layout, map.n_qubits());
          c = transpiled.circuit;
        }
        datasets.push_back(collect_dataset(c, h, nm, zn_lambdas, zn_replicates,
                                           zn_shots, zn_seed + static_cast<unsigned>(k)));
      }
      nlohmann::json report;
      if (datasets.size() == 1) {
        const pp::FitReport fit =
            pp::fit_extrapolate(datasets[0], degrees, 0.25, zn_seed);
        report["degree"] = fit.degree;
        report["intercept"] = fit.intercept;
        report["intercept_se"] = fit.intercept_se;
        if (zn_bootstrap > 0) {
          const auto boot = pp::bootstrap_intercept(datasets[0], fit.degree,
                                                    zn_bootstrap, zn_seed + 101);
          report["bootstrap"] = {{"median", boot.median},
                                 {"p15", boot.p15},
                                 {"p85", boot.p85}};
        }
        std::printf("intercept %.9f +- %.9f (degree %zu)\n", fit.intercept,
                    fit.intercept_se, fit.degree);
      } else {
        const bool diff_first = zn_method == "diff-first";
        if (zn_method != "diff-first" && zn_method != "fit-first") {
          throw pp::ValidationError("--method must be fit-first or diff-first");
        }
        const pp::BarrierEstimate estimate =
            diff_first ? pp::barrier_diff_first(datasets[0], datasets[1],
                                                degrees, 0.25, zn_seed)
                       : pp::barrier_fit_first(datasets[0], datasets[1],
                                               degrees, 0.25, zn_seed);
        report["method"] = zn_method;
        report["delta_e"] = estimate.delta_e;
        report["sigma"] = estimate.sigma;
        if (zn_bootstrap > 0) {
          const pp::BootstrapInterval boot =
              diff_first
                  ? pp::bootstrap_intercept(
                        pp::paired_difference(datasets[0], datasets[1]),
                        estimate.middle.degree, zn_bootstrap, zn_seed + 202)
                  : pp::bootstrap_barrier_fit_first(
                        datasets[0], datasets[1], estimate.left.degree,
                        estimate.middle.degree, zn_bootstrap, zn_seed + 101);
          report["bootstrap"] = {{"median", boot.median},
                                 {"p15", boot.p15},
                                 {"p85", boot.p85}};
        }
        std::printf("%s barrier %.6f mHa +- %.6f mHa\n", zn_method.c_str(),
                    estimate.delta_e * 1e3, estimate.sigma * 1e3);
      }
      if (!zn_out.empty()) spill(zn_out, report.dump(2) + "\n");
    } else if (rate->parsed()) {
      if (ra_points < 2) throw pp::ValidationError("--points must be >= 2");
      std::string csv = "temperature_k,rate_ratio\n";
      char buf[64];
      for (std::size_t k = 0; k < ra_points; ++k) {
        const double t = ra_tmin + (ra_tmax - ra_tmin) *
                                       static_cast<double>(k) /
                                       static_cast<double>(ra_points - 1);
        std::snprintf(buf, sizeof buf, "%.6g,%.12g\n", t,
                      pp::rate_constant_ratio(ra_barrier_mha * 1e-3, t));
        csv += buf;
      }
      if (ra_out.empty()) {
        std::cout << csv;
      } else {
        spill(ra_out, csv);
      }
      if (ra_sensitivity_mha >= 0.0) {
        const auto s =
            pp::rate_sensitivity(ra_sensitivity_mha * 1e-3, ra_temperature);
        std::printf("sensitivity at %.6g K: linearized %.6f exact %.6f\n",
                    ra_temperature, s.linearized, s.exact);
      }
    } else if (density->parsed()) {
      const pp::StateVector psi = pp::load_state(de_state);
      const pp::ModeLayout layout{de_n_elec, de_n_prot};
      if (layout.total_modes() != psi.n_qubits()) {
        throw pp::ValidationError("mode counts do not match the state register");
      }
      Eigen::MatrixXcd gamma = pp::orbital_1rdm(psi, layout, false);
      if (de_sum_spin) {
        if (de_n_prot % 2 != 0) {
          throw pp::ValidationError("--sum-spin-pairs needs an even mode count");
        }
        Eigen::MatrixXcd spatial(de_n_prot / 2, de_n_prot / 2);
        for (std::size_t p = 0; p < de_n_prot / 2; ++p)
          for (std::size_t q = 0; q < de_n_prot / 2; ++q)
            spatial(p, q) = gamma(2 * p, 2 * q) + gamma(2 * p + 1, 2 * q + 1);
        gamma = spatial;
      }
      const pp::OrbitalGrid grid = pp::OrbitalGrid::from_file(de_grid);
      const pp::ProtonDensity result = pp::proton_density(gamma, grid);
      std::string csv = "x,y,z,rho\n";
      char buf[128];
      for (std::size_t i = 0; i < grid.n_points(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.12g\n",
                      grid.points(i, 0), grid.points(i, 1), grid.points(i, 2),
                      result.values(i));
        csv += buf;
      }
      spill(de_out, csv);
      std::printf("integral %.9f\nmean_position %.9f %.9f %.9f\n",
                  result.integral, result.mean_position(0),
                  result.mean_position(1), result.mean_position(2));
    } else if (pipeline->parsed()) {
      const pp::PipelineConfig cfg = pp::PipelineConfig::from_file(pi_config);
      const pp::PipelineResult result = pp::run_pipeline(cfg, pi_out);
      bool any_failed = false;
      for (const auto& stage : result.stages) {
        std::printf("%-14s %-8s %s\n", stage.name.c_str(), stage.status.c_str(),
                    stage.detail.c_str());
        any_failed = any_failed || stage.status == "failed";
      }
      if (any_failed) {
        return static_cast<int>(pp::ExitCode::Stage);
      }
    }
  } catch (const pp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(pp::ExitCode::Validation);
  }
  return 0;
}
