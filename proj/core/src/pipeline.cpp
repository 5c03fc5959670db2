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

#include "protonpipe/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "protonpipe/adapt.hpp"
#include "protonpipe/aqc.hpp"
#include "protonpipe/errors.hpp"
#include "protonpipe/noise.hpp"
#include "protonpipe/transpile.hpp"
#include "protonpipe/zne.hpp"

namespace protonpipe {

namespace fs = std::filesystem;

namespace {

std::string fmt(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw StageError("cannot write " + path.string());
  out << content;
}

/// Relabels operator letters onto physical qubits per the final layout.
PauliSum remap_operator(const PauliSum& h,
                        const std::vector<std::size_t>& layout,
                        std::size_t n_physical) {
  PauliSum out(n_physical);
  for (const auto& [letters, coeff] : h.terms()) {
    std::string mapped(n_physical, 'I');
    for (std::size_t l = 0; l < letters.size(); ++l) {
      mapped[layout[l]] = letters[l];
    }
    out.add_term(mapped, coeff);
  }
  return out;
}

NoiseModel default_noise_model(std::size_t n_qubits) {
  NoiseModel nm = NoiseModel::ideal(n_qubits);
  QubitNoise q;
  q.t1 = 300e-6;
  q.t2 = 250e-6;
  q.readout_p01 = 0.01;
  q.readout_p10 = 0.015;
  for (std::size_t k = 0; k < n_qubits; ++k) nm.set_qubit(k, q);
  nm.set_gate_default("cz", GateNoise{4e-3, 68e-9});
  nm.set_gate_default("cx", GateNoise{4e-3, 68e-9});
  nm.set_gate_default("sx", GateNoise{2e-4, 32e-9});
  nm.set_gate_default("h", GateNoise{2e-4, 32e-9});
  nm.set_gate_default("x", GateNoise{2e-4, 32e-9});
  nm.set_gate_default("rx", GateNoise{2e-4, 32e-9});
  nm.set_gate_default("ry", GateNoise{2e-4, 32e-9});
  nm.set_gate_default("rz", GateNoise{0.0, 0.0});
  return nm;
}

struct LabelData {
  PauliSum hamiltonian{0};
  GroundState casci{0.0, StateVector(1)};
  bool have_casci = false;
  AdaptResult vqe_shallow;
  bool have_shallow = false;
  AdaptResult vqe_deep;
  bool have_deep = false;
  AqcResult aqc_high;
  AqcResult aqc_low;
  bool have_aqc_high = false;
  bool have_aqc_low = false;
};

}  // namespace

PipelineConfig PipelineConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config JSON malformed: ") + e.what());
  }
  PipelineConfig cfg;
  try {
    const auto& integrals = j.at("integrals");
    cfg.left_integrals = integrals.at("left").get<std::string>();
    cfg.middle_integrals = integrals.at("middle").get<std::string>();
    cfg.right_integrals = integrals.at("right").get<std::string>();
    for (const auto& v : j.at("occupied_electrons")) {
      cfg.occupied_electrons.insert(v.get<std::size_t>());
    }
    for (const auto& v : j.at("occupied_protons")) {
      cfg.occupied_protons.insert(v.get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config JSON incomplete: ") + e.what());
  }
  if (j.contains("stages")) {
    const auto& s = j["stages"];
    cfg.stage_hf = s.value("hf", true);
    cfg.stage_vqe_deep = s.value("vqe_deep", true);
    cfg.stage_vqe_shallow = s.value("vqe_shallow", true);
    cfg.stage_aqc_high = s.value("aqc_high", true);
    cfg.stage_aqc_low = s.value("aqc_low", true);
    cfg.stage_zne = s.value("zne", true);
  }
  if (j.contains("adapt")) {
    const auto& a = j["adapt"];
    cfg.deep_threshold = a.value("deep_threshold", cfg.deep_threshold);
    cfg.shallow_threshold = a.value("shallow_threshold", cfg.shallow_threshold);
    cfg.pool_kind = a.value("pool", cfg.pool_kind);
    cfg.adapt_max_iterations =
        a.value("max_iterations", cfg.adapt_max_iterations);
  }
  if (j.contains("aqc")) {
    cfg.aqc_block_budget = j["aqc"].value("block_budget", cfg.aqc_block_budget);
  }
  cfg.coupling_spec = j.value("coupling", cfg.coupling_spec);
  if (j.contains("zne")) {
    const auto& z = j["zne"];
    if (z.contains("lambdas")) {
      cfg.zne_lambdas.clear();
      for (const auto& v : z["lambdas"]) cfg.zne_lambdas.push_back(v.get<double>());
    }
    cfg.zne_replicates = z.value("replicates", cfg.zne_replicates);
    cfg.zne_shots = z.value("shots", cfg.zne_shots);
    if (z.contains("degrees")) {
      cfg.zne_degrees.clear();
      for (const auto& v : z["degrees"]) cfg.zne_degrees.insert(v.get<std::size_t>());
    }
    cfg.bootstrap_replicates = z.value("bootstrap", cfg.bootstrap_replicates);
    cfg.calibration_path = z.value("calibration", cfg.calibration_path);
  }
  cfg.density_grid_path = j.value("density_grid", cfg.density_grid_path);
  if (j.contains("temperatures")) {
    cfg.temperatures.clear();
    for (const auto& v : j["temperatures"]) cfg.temperatures.push_back(v.get<double>());
  }
  cfg.seed = j.value("seed", cfg.seed);
  if (cfg.pool_kind != "fermionic" && cfg.pool_kind != "qubit") {
    throw ValidationError("pool must be `fermionic` or `qubit`");
  }
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string PipelineConfig::to_json() const {
  nlohmann::json j;
  j["integrals"] = {{"left", left_integrals},
                    {"middle", middle_integrals},
                    {"right", right_integrals}};
  j["occupied_electrons"] = occupied_electrons;
  j["occupied_protons"] = occupied_protons;
  j["stages"] = {{"hf", stage_hf},
                 {"vqe_deep", stage_vqe_deep},
                 {"vqe_shallow", stage_vqe_shallow},
                 {"aqc_high", stage_aqc_high},
                 {"aqc_low", stage_aqc_low},
                 {"zne", stage_zne}};
  j["adapt"] = {{"deep_threshold", deep_threshold},
                {"shallow_threshold", shallow_threshold},
                {"pool", pool_kind},
                {"max_iterations", adapt_max_iterations}};
  j["aqc"] = {{"block_budget", aqc_block_budget}};
  j["coupling"] = coupling_spec;
  j["zne"] = {{"lambdas", zne_lambdas},
              {"replicates", zne_replicates},
              {"shots", zne_shots},
              {"degrees", zne_degrees},
              {"bootstrap", bootstrap_replicates},
              {"calibration", calibration_path}};
  j["density_grid"] = density_grid_path;
  j["temperatures"] = temperatures;
  j["seed"] = seed;
  return j.dump(2);
}

bool PipelineResult::stage_ok(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return s.status == "ok";
  }
  return false;
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::string& run_dir) {
  PipelineResult result;
  result.run_dir = run_dir;
  result.config_hash = fnv1a(config.to_json());
  const fs::path root(run_dir);
  fs::create_directories(root);

  std::vector<PathPoint>& points = result.path_points;
  auto record = [&](const std::string& name, const std::string& status,
                    const std::string& detail = "") {
    result.stages.push_back({name, status, detail});
  };

  // ---- assemble -----------------------------------------------------------
  ModeLayout layout;
  std::map<std::string, LabelData> data;
  PauliSum h_left{0}, h_middle{0}, h_right{0};
  bool assembled = false;
  try {
    const NeoIntegrals left = parse_integrals_file(config.left_integrals);
    const NeoIntegrals middle = parse_integrals_file(config.middle_integrals);
    const NeoIntegrals right = parse_integrals_file(config.right_integrals);
    if (middle.layout.total_modes() != left.layout.total_modes() ||
        right.layout.total_modes() != left.layout.total_modes()) {
      throw ValidationError("integral sets disagree on the mode layout");
    }
    layout = left.layout;
    h_left = assemble(left);
    h_middle = assemble(middle);
    h_right = assemble(right);
    for (const std::string& label : lmr_trajectory()) {
      LabelData entry;
      entry.hamiltonian = interpolate(h_left, h_middle, h_right,
                                      LmrWeights::from_label(label));
      write_file(root / "ham" / label / "operator.txt",
                 entry.hamiltonian.to_text());
      data.emplace(label, std::move(entry));
    }
    assembled = true;
    record("assemble", "ok");
  } catch (const Error& e) {
    record("assemble", "failed", e.what());
  }

  const std::size_t n_qubits = assembled ? layout.total_modes() : 0;
  const SectorSpec sector{layout, config.occupied_electrons.size(),
                          config.occupied_protons.size()};

  // ---- exact diagonalization ----------------------------------------------
  bool have_casci = false;
  if (assembled) {
    try {
      for (const std::string& label : lmr_trajectory()) {
        LabelData& entry = data.at(label);
        entry.casci = exact_ground_state(entry.hamiltonian, sector);
        entry.have_casci = true;
        fs::create_directories(root / "exact" / label);
        save_state(entry.casci.state,
                   (root / "exact" / label / "state.bin").string());
        std::vector<std::size_t> proton_qubits;
        for (std::size_t p = 0; p < layout.n_proton_modes; ++p) {
          proton_qubits.push_back(layout.proton_mode(p));
        }
        const double entropy = entanglement_entropy(
            reduced_density(entry.casci.state, proton_qubits));
        nlohmann::json info;
        info["energy"] = entry.casci.energy;
        info["proton_entanglement_entropy"] = entropy;
        write_file(root / "exact" / label / "result.json", info.dump(2) + "\n");
        points.push_back({label, entry.casci.energy, "CASCI", {}});
      }
      have_casci = true;
      record("casci", "ok");
    } catch (const Error& e) {
      record("casci", "failed", e.what());
    }
  } else {
    record("casci", "skipped", "assemble failed");
  }

  const CouplingMap coupling = coupling_from_spec(config.coupling_spec);

  auto make_pool = [&]() {
    return config.pool_kind == "fermionic"
               ? make_fermionic_pool(layout, config.occupied_electrons,
                                     config.occupied_protons)
               : make_qubit_pool(layout, config.occupied_electrons,
                                 config.occupied_protons);
  };

  // ---- HF reference ---------------------------------------------------------
  if (config.stage_hf && have_casci) {
    try {
      const StateVector ref = reference_state(layout, config.occupied_electrons,
                                              config.occupied_protons);
      for (const std::string& label : lmr_trajectory()) {
        const LabelData& entry = data.at(label);
        points.push_back({label, expectation(ref, entry.hamiltonian), "HF", {}});
      }
      record("hf", "ok");
    } catch (const Error& e) {
      record("hf", "failed", e.what());
    }
  } else if (config.stage_hf) {
    record("hf", "skipped", "no exact reference");
  }

  // ---- ADAPT-VQE ------------------------------------------------------------
  auto run_adapt = [&](const std::string& stage, double threshold,
                       const std::string& method, bool& have_flag,
                       AdaptResult LabelData::*slot) {
    try {
      const auto pool = make_pool();
      const StateVector ref = reference_state(layout, config.occupied_electrons,
                                              config.occupied_protons);
      for (const std::string& label : lmr_trajectory()) {
        LabelData& entry = data.at(label);
        AdaptOptions options;
        options.threshold = threshold;
        options.exact_energy = entry.casci.energy;
        options.max_iterations = config.adapt_max_iterations;
        options.seed = config.seed;
        AdaptResult adapt = adapt_vqe(entry.hamiltonian, pool, ref, options);
        const fs::path dir = root / stage / label;
        write_file(dir / "state.json", adapt.state.to_json(pool) + "\n");
        write_file(dir / "circuit.txt", adapt.circuit.to_text());
        const auto transpiled = transpile(adapt.circuit, coupling);
        const auto metrics = two_qubit_metrics(transpiled.circuit);
        const StateVector prepared = run(adapt.circuit, ref);
        nlohmann::json info;
        info["energy"] = adapt.energy;
        info["error_vs_casci"] = adapt.energy - entry.casci.energy;
        info["fidelity_vs_casci"] = fidelity(prepared, entry.casci.state);
        info["iterations"] = adapt.state.selected.size();
        info["two_qubit_count"] = metrics.count;
        info["two_qubit_depth"] = metrics.depth;
        info["converged"] = adapt.state.converged;
        write_file(dir / "result.json", info.dump(2) + "\n");
        points.push_back({label, adapt.energy, method, {}});
        entry.*slot = std::move(adapt);
      }
      have_flag = true;
      record(stage, "ok");
    } catch (const Error& e) {
      record(stage, "failed", e.what());
    }
  };

  bool have_shallow_stage = false;
  bool have_deep_stage = false;
  if (config.stage_vqe_deep && have_casci) {
    run_adapt("adapt_deep", config.deep_threshold, "VQE-deep", have_deep_stage,
              &LabelData::vqe_deep);
    for (const std::string& label : lmr_trajectory()) {
      data.at(label).have_deep = have_deep_stage;
    }
  } else if (config.stage_vqe_deep) {
    record("adapt_deep", "skipped", "no exact reference");
  }
  if (config.stage_vqe_shallow && have_casci) {
    run_adapt("adapt_shallow", config.shallow_threshold, "VQE-shallow",
              have_shallow_stage, &LabelData::vqe_shallow);
    for (const std::string& label : lmr_trajectory()) {
      data.at(label).have_shallow = have_shallow_stage;
    }
  } else if (config.stage_vqe_shallow) {
    record("adapt_shallow", "skipped", "no exact reference");
  }

  // ---- ADAPT-AQC ------------------------------------------------------------
  auto run_aqc = [&](const std::string& stage, const std::string& preset,
                     const std::string& method, bool LabelData::*have_slot,
                     AqcResult LabelData::*slot) {
    try {
      const StateVector ref = reference_state(layout, config.occupied_electrons,
                                              config.occupied_protons);
      for (const std::string& label : lmr_trajectory()) {
        LabelData& entry = data.at(label);
        const StateVector target = run(entry.vqe_shallow.circuit, ref);
        AqcConfig cfg = AqcConfig::preset(preset, coupling, config.seed);
        cfg.block_budget = config.aqc_block_budget;
        AqcResult aqc = compile(target, cfg);
        const fs::path dir = root / stage / label;
        write_file(dir / "circuit.txt", aqc.circuit.to_text());
        const auto transpiled = transpile(aqc.circuit, coupling);
        const auto metrics = two_qubit_metrics(transpiled.circuit);
        const StateVector prepared = run(aqc.circuit, StateVector(n_qubits));
        const double energy = expectation(prepared, entry.hamiltonian);
        nlohmann::json info;
        info["energy"] = energy;
        info["error_vs_casci"] = energy - entry.casci.energy;
        info["fidelity_vs_target"] = aqc.achieved_fidelity;
        info["fidelity_vs_casci"] = fidelity(prepared, entry.casci.state);
        info["blocks"] = aqc.blocks.size();
        info["two_qubit_count"] = metrics.count;
        info["two_qubit_depth"] = metrics.depth;
        info["converged"] = aqc.converged;
        write_file(dir / "report.json", info.dump(2) + "\n");
        points.push_back({label, energy, method, {}});
        entry.*have_slot = true;
        entry.*slot = std::move(aqc);
      }
      record(stage, "ok");
    } catch (const Error& e) {
      record(stage, "failed", e.what());
    }
  };

  if (config.stage_aqc_high && have_shallow_stage) {
    run_aqc("aqc_high", "high", "AQC-high", &LabelData::have_aqc_high,
            &LabelData::aqc_high);
  } else if (config.stage_aqc_high) {
    record("aqc_high", "skipped", "no VQE-shallow targets");
  }
  if (config.stage_aqc_low && have_shallow_stage) {
    run_aqc("aqc_low", "low", "AQC-low", &LabelData::have_aqc_low,
            &LabelData::aqc_low);
  } else if (config.stage_aqc_low) {
    record("aqc_low", "skipped", "no VQE-shallow targets");
  }

  // ---- noisy ZNE on the path endpoints --------------------------------------
  if (config.stage_zne && result.stage_ok("aqc_low")) {
    try {
      const NoiseModel nm =
          config.calibration_path.empty()
              ? default_noise_model(coupling.n_qubits())
              : NoiseModel::from_file(config.calibration_path);
      std::map<std::string, ZneDataset> datasets;
      std::map<std::string, FitReport> fits;
      for (const std::string& label : {std::string("300"), std::string("030")}) {
        LabelData& entry = data.at(label);
        const auto transpiled = transpile(entry.aqc_low.circuit, coupling);
        const PauliSum h_phys = remap_operator(
            entry.hamiltonian, transpiled.final_layout, coupling.n_qubits());
        ZneDataset dataset;
        dataset.lambdas = config.zne_lambdas;
        std::size_t lambda_index = 0;
        for (double lambda : config.zne_lambdas) {
          std::vector<double> samples;
          for (std::size_t rep = 0; rep < config.zne_replicates; ++rep) {
            const unsigned fold_seed = config.seed * 1000u +
                                       static_cast<unsigned>(lambda_index) * 100u +
                                       static_cast<unsigned>(rep);
            const Circuit folded = fold(transpiled.circuit, lambda, fold_seed);
            const double value =
                config.zne_shots == 0
                    ? noisy_expectation(folded, h_phys, nm)
                    : noisy_expectation_sampled(folded, h_phys, nm,
                                                config.zne_shots,
                                                fold_seed + 17u);
            samples.push_back(value);
          }
          dataset.samples.push_back(std::move(samples));
          ++lambda_index;
        }
        // Dataset CSV: lambda,replicate,energy.
        std::string csv = "lambda,replicate,energy\n";
        for (std::size_t k = 0; k < dataset.lambdas.size(); ++k) {
          for (std::size_t r = 0; r < dataset.samples[k].size(); ++r) {
            csv += fmt(dataset.lambdas[k]) + "," + std::to_string(r) + "," +
                   fmt(dataset.samples[k][r]) + "\n";
          }
        }
        write_file(root / "zne" / label / "dataset.csv", csv);
        const FitReport fit =
            fit_extrapolate(dataset, config.zne_degrees, 0.25, config.seed);
        nlohmann::json info;
        info["degree"] = fit.degree;
        info["intercept"] = fit.intercept;
        info["intercept_se"] = fit.intercept_se;
        info["notes"] = fit.notes;
        write_file(root / "zne" / label / "fit.json", info.dump(2) + "\n");
        points.push_back({label, fit.intercept, "ZNE", fit.intercept_se});
        datasets.emplace(label, std::move(dataset));
        fits.emplace(label, fit);
      }
      const BarrierEstimate fit_first = barrier_fit_first(
          datasets.at("300"), datasets.at("030"), config.zne_degrees, 0.25,
          config.seed);
      const BarrierEstimate diff_first = barrier_diff_first(
          datasets.at("300"), datasets.at("030"), config.zne_degrees, 0.25,
          config.seed);
      const BootstrapInterval boot_fit = bootstrap_barrier_fit_first(
          datasets.at("300"), datasets.at("030"), fits.at("300").degree,
          fits.at("030").degree, config.bootstrap_replicates, config.seed + 101);
      const ZneDataset diff =
          paired_difference(datasets.at("300"), datasets.at("030"));
      const BootstrapInterval boot_diff = bootstrap_intercept(
          diff, diff_first.middle.degree, config.bootstrap_replicates,
          config.seed + 202);
      nlohmann::json barrier_info;
      barrier_info["fit_first"] = {{"delta_e", fit_first.delta_e},
                                   {"sigma", fit_first.sigma}};
      barrier_info["diff_first"] = {{"delta_e", diff_first.delta_e},
                                    {"sigma", diff_first.sigma}};
      barrier_info["bootstrap"] = {
          {"fit_first",
           {{"median", boot_fit.median}, {"p15", boot_fit.p15},
            {"p85", boot_fit.p85}}},
          {"diff_first",
           {{"median", boot_diff.median}, {"p15", boot_diff.p15},
            {"p85", boot_diff.p85}}}};
      write_file(root / "zne" / "barrier.json", barrier_info.dump(2) + "\n");
      // Bootstrap summary table (mHa), one row per extrapolation method.
      std::string table = "method,median_mha,p15_mha,p85_mha\n";
      table += "fit_first," + fmt(boot_fit.median * 1e3) + "," +
               fmt(boot_fit.p15 * 1e3) + "," + fmt(boot_fit.p85 * 1e3) + "\n";
      table += "diff_first," + fmt(boot_diff.median * 1e3) + "," +
               fmt(boot_diff.p15 * 1e3) + "," + fmt(boot_diff.p85 * 1e3) + "\n";
      write_file(root / "results" / "zne_bootstrap.csv", table);
      record("zne", "ok");
    } catch (const Error& e) {
      record("zne", "failed", e.what());
    }
  } else if (config.stage_zne) {
    record("zne", "skipped", "no AQC-low circuits");
  }

  // ---- result tables ---------------------------------------------------------
  try {
    const std::vector<std::string> method_order = {
        "CASCI", "HF", "VQE-deep", "VQE-shallow", "AQC-high", "AQC-low", "ZNE"};
    std::string table =
        "label,method,energy_ha,error_vs_casci_ha,fidelity_vs_casci,"
        "two_qubit_count,two_qubit_depth,uncertainty_ha\n";
    for (const std::string& label : lmr_trajectory()) {
      for (const std::string& method : method_order) {
        const PathPoint* found = nullptr;
        for (const auto& p : points) {
          if (p.label == label && p.method == method) found = &p;
        }
        if (!found) continue;
        double casci_energy = 0.0;
        bool have_ref = false;
        for (const auto& p : points) {
          if (p.label == label && p.method == "CASCI") {
            casci_energy = p.energy;
            have_ref = true;
          }
        }
        std::string count = "", depth = "", fid = "";
        if (assembled) {
          const LabelData& entry = data.at(label);
          auto metrics_for = [&](const Circuit& c) {
            const auto t = transpile(c, coupling);
            const auto m = two_qubit_metrics(t.circuit);
            return std::pair<std::string, std::string>{
                std::to_string(m.count), std::to_string(m.depth)};
          };
          auto fidelity_for = [&](const StateVector& psi) {
            return entry.have_casci ? fmt(fidelity(psi, entry.casci.state))
                                    : std::string();
          };
          const StateVector ref = reference_state(
              layout, config.occupied_electrons, config.occupied_protons);
          if (method == "CASCI" && entry.have_casci) {
            fid = "1";
          } else if (method == "HF") {
            count = "0";
            depth = "0";
            fid = fidelity_for(ref);
          } else if (method == "VQE-deep" && entry.have_deep) {
            std::tie(count, depth) = metrics_for(entry.vqe_deep.circuit);
            fid = fidelity_for(run(entry.vqe_deep.circuit, ref));
          } else if (method == "VQE-shallow" && entry.have_shallow) {
            std::tie(count, depth) = metrics_for(entry.vqe_shallow.circuit);
            fid = fidelity_for(run(entry.vqe_shallow.circuit, ref));
          } else if (method == "AQC-high" && entry.have_aqc_high) {
            std::tie(count, depth) = metrics_for(entry.aqc_high.circuit);
            fid = fidelity_for(run(entry.aqc_high.circuit, StateVector(n_qubits)));
          } else if (method == "AQC-low" && entry.have_aqc_low) {
            std::tie(count, depth) = metrics_for(entry.aqc_low.circuit);
            fid = fidelity_for(run(entry.aqc_low.circuit, StateVector(n_qubits)));
          }
        }
        table += label + "," + method + "," + fmt(found->energy) + "," +
                 (have_ref ? fmt(found->energy - casci_energy) : "") + "," +
                 fid + "," + count + "," + depth + "," +
                 (found->uncertainty ? fmt(*found->uncertainty) : "") + "\n";
      }
    }
    write_file(root / "results" / "path_table.csv", table);

    // Rate-constant ratio curves for every method with both endpoints.
    std::vector<double> temperatures = config.temperatures;
    if (temperatures.empty()) {
      for (int k = 0; k < 12; ++k) temperatures.push_back(80.0 + 20.0 * k);
    }
    std::string rates = "temperature_k";
    std::vector<std::pair<std::string, double>> barriers;
    for (const std::string& method : method_order) {
      try {
        barriers.push_back({method, barrier(points, method).delta_e});
        rates += "," + method;
      } catch (const DataError&) {
      }
    }
    rates += "\n";
    for (double t : temperatures) {
      rates += fmt(t);
      for (const auto& [method, delta] : barriers) {
        rates += "," + fmt(rate_constant_ratio(delta, t));
      }
      rates += "\n";
    }
    write_file(root / "results" / "rates.csv", rates);

    // Proton densities on a user grid, per method family.
    if (!config.density_grid_path.empty() && have_casci) {
      const OrbitalGrid grid = OrbitalGrid::from_file(config.density_grid_path);
      const StateVector ref = reference_state(layout, config.occupied_electrons,
                                              config.occupied_protons);
      for (const std::string& label : lmr_trajectory()) {
        const LabelData& entry = data.at(label);
        auto emit = [&](const std::string& method, const StateVector& psi) {
          const Eigen::MatrixXcd gamma = orbital_1rdm(psi, layout, false);
          const ProtonDensity density = proton_density(gamma, grid);
          std::string csv = "x,y,z,rho\n";
          for (std::size_t i = 0; i < grid.n_points(); ++i) {
            csv += fmt(grid.points(i, 0)) + "," + fmt(grid.points(i, 1)) + "," +
                   fmt(grid.points(i, 2)) + "," + fmt(density.values(i)) + "\n";
          }
          write_file(root / "density" / label / (method + ".csv"), csv);
          nlohmann::json info;
          info["mean_position"] = {density.mean_position(0),
                                   density.mean_position(1),
                                   density.mean_position(2)};
          info["integral"] = density.integral;
          write_file(root / "density" / label / (method + "_position.json"),
                     info.dump(2) + "\n");
        };
        emit("casci", entry.casci.state);
        if (entry.have_shallow) {
          emit("vqe_shallow", run(entry.vqe_shallow.circuit, ref));
        }
        if (entry.have_aqc_low) {
          emit("aqc_low", run(entry.aqc_low.circuit, StateVector(n_qubits)));
        }
      }
    }
    record("results", "ok");
  } catch (const Error& e) {
    record("results", "failed", e.what());
  }

  // ---- manifest ---------------------------------------------------------------
  nlohmann::json manifest;
  manifest["tool"] = "protonpipe";
  manifest["config_hash"] = result.config_hash;
  manifest["seed"] = config.seed;
  manifest["config"] = nlohmann::json::parse(config.to_json());
  nlohmann::json stage_list = nlohmann::json::array();
  for (const auto& s : result.stages) {
    stage_list.push_back(
        {{"name", s.name}, {"status", s.status}, {"detail", s.detail}});
  }
  manifest["stages"] = stage_list;
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace protonpipe
