// Copyright 2026 The pepslab Authors
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

// pepslab command-line front end. Every subcommand prints one JSON report
// on stdout. Exit codes: 0 success, 1 invalid input, 2 guard or numerical
// failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pepslab/pepslab.hpp"

namespace {

using namespace pepslab;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  bool force = false;
  bool json_output = true;
};

ContractionOptions contraction_options(const Globals& g) {
  ContractionOptions o;
  o.force = g.force;
  return o;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json nev_json(const NevResult& r) {
  return {{"value", r.value}, {"imag_residue", r.imag_residue}, {"norm", r.norm}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pepslab: exact PEPS contraction, parent Hamiltonians, circuit embedding and tilings"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every random choice")->capture_default_str();
  app.add_flag("--force", globals.force, "Override size guards");
  app.add_flag("--json", globals.json_output, "Emit JSON (the only format)");

  std::string network_path, observable_path, out_path, circuit_path, tiles_path, input;
  double delta = 0.0, eta = 0.0;
  std::size_t radius = 1, rows = 0, cols = 0, copies = 0, k_eigs = 4, extrapolate = 0, bond_dim = 2, phys_dim = 0;
  bool normalize = false, with_decision = false;
  std::optional<double> tile_delta;

  auto* norm = app.add_subcommand("norm", "Norm <Psi|Psi> of a network");
  norm->add_option("--network", network_path, "Network file")->required();

  auto* nev = app.add_subcommand("nev", "Normalized expectation value of an observable");
  nev->add_option("--network", network_path, "Network file")->required();
  nev->add_option("--observable", observable_path, "Observable file")->required();
  nev->add_flag("--decide", with_decision, "Add the accept/reject/undetermined decision");

  auto* inject = app.add_subcommand("inject", "Per-site and global injectivity");
  inject->add_option("--network", network_path, "Network file")->required();
  inject->add_flag("--normalize-sigma1", normalize, "Rescale every site so its largest singular value is 1");
  inject->add_option("--out", out_path, "Write the (possibly rescaled) network here");

  auto* ph = app.add_subcommand("parent-ham", "Low spectrum of the parent Hamiltonian");
  ph->add_option("--network", network_path, "Network file")->required();
  ph->add_option("--k", k_eigs, "Number of eigenvalues")->capture_default_str();

  auto* patch = app.add_subcommand("patch-nev", "Local patch estimate of an expectation value");
  patch->add_option("--network", network_path, "Network file")->required();
  patch->add_option("--observable", observable_path, "Observable file")->required();
  patch->add_option("--radius", radius, "Patch radius")->capture_default_str();

  auto* compile = app.add_subcommand("compile-circuit", "Embed a circuit in a PEPS");
  compile->add_option("--circuit", circuit_path, "Circuit file")->required();
  compile->add_option("--delta", delta, "Injectivity of the cell tensors")->required();
  compile->add_option("--out", out_path, "Write the network here instead of inlining it");

  auto* sim = app.add_subcommand("sim", "Noisy density-matrix simulation");
  sim->require_subcommand(1);
  auto* sim_run = sim->add_subcommand("run", "Run a circuit");
  sim_run->add_option("--circuit", circuit_path, "Circuit file")->required();
  sim_run->add_option("--eta", eta, "Depolarizing rate")->required();
  sim_run->add_option("--input", input, "Input bit string");
  sim_run->add_option("--observable", observable_path, "Observable file (support = wires)")->required();
  sim_run->add_option("--copies", copies, "Postselect wire 0 through this many noisy copies");

  auto* tile = app.add_subcommand("tile", "Wang tilings");
  tile->require_subcommand(1);
  auto* tile_count = tile->add_subcommand("count", "Count periodic tilings");
  tile_count->add_option("--tiles", tiles_path, "Tile-set file")->required();
  tile_count->add_option("--rows", rows, "Grid rows")->required();
  tile_count->add_option("--cols", cols, "Grid columns")->required();
  tile_count->add_option("--delta", tile_delta, "Report the interpolated norm at this delta");
  tile_count->add_option("--extrapolate", extrapolate, "Extrapolate from this many points in (1/2, 1)");

  auto* gen = app.add_subcommand("generate", "Random open-grid network with prescribed injectivity");
  gen->add_option("--rows", rows, "Grid rows")->required();
  gen->add_option("--cols", cols, "Grid columns")->required();
  gen->add_option("--bond-dim", bond_dim, "Bond dimension")->capture_default_str();
  gen->add_option("--phys-dim", phys_dim, "Physical dimension (0: match the virtual dimension)");
  gen->add_option("--delta", delta, "Target injectivity")->required();
  gen->add_option("--out", out_path, "Write the network here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ContractionOptions copts = contraction_options(globals);
    if (norm->parsed()) {
      const PepsNetwork net = network_from_json(read_json_file(network_path));
      emit({{"norm", peps_norm(net, copts)}});
    } else if (nev->parsed()) {
      const PepsNetwork net = network_from_json(read_json_file(network_path));
      const Observable obs = observable_from_json(read_json_file(observable_path));
      const NevResult r = peps_nev(net, obs, copts);
      json j = nev_json(r);
      if (with_decision) j["decision"] = to_string(decide(r.value));
      emit(j);
    } else if (inject->parsed()) {
      PepsNetwork net = network_from_json(read_json_file(network_path));
      if (normalize) net = normalize_sigma1(net);
      json sites = json::array();
      for (const auto& s : injectivity_report(net)) {
        json sj = {{"site", s.site}, {"delta", s.delta}, {"injective", s.injective}};
        if (!s.reason.empty()) sj["reason"] = s.reason;
        sites.push_back(sj);
      }
      json j = {{"injectivity", peps_injectivity(net)}, {"sites", sites}};
      if (!out_path.empty()) {
        write_json_file(out_path, to_json(net));
        j["out"] = out_path;
      }
      emit(j);
    } else if (ph->parsed()) {
      const PepsNetwork net = network_from_json(read_json_file(network_path));
      KrylovOptions kopts;
      kopts.seed = globals.seed;
      const SpectrumReport r = spectrum_report(net, k_eigs, false, kopts, globals.force);
      emit({{"eigenvalues", r.eigenvalues},
            {"degeneracy", r.degeneracy},
            {"gap", r.gap},
            {"overlap", r.overlap},
            {"max_term_norm", r.max_term_norm},
            {"normalized_gap", r.normalized_gap},
            {"peps_energy", r.peps_energy},
            {"min_term_eigenvalue", r.min_term_eigenvalue}});
    } else if (patch->parsed()) {
      const PepsNetwork net = network_from_json(read_json_file(network_path));
      const Observable obs = observable_from_json(read_json_file(observable_path));
      json j = nev_json(patch_nev(net, obs, radius, copts));
      j["radius"] = radius;
      emit(j);
    } else if (compile->parsed()) {
      const Circuit c = circuit_from_json(read_json_file(circuit_path));
      const CompiledCircuit cc = compile_circuit(c, delta);
      json j = {{"delta", delta},
                {"eta", eta_from_delta(delta)},
                {"cells", cc.cells.size()},
                {"readout_vertex", cc.readout_vertex},
                {"injectivity", peps_injectivity(cc.network)}};
      if (out_path.empty()) {
        j["network"] = to_json(cc.network);
      } else {
        write_json_file(out_path, to_json(cc.network));
        j["out"] = out_path;
      }
      emit(j);
    } else if (sim_run->parsed()) {
      const Circuit c = circuit_from_json(read_json_file(circuit_path));
      const Observable obs = observable_from_json(read_json_file(observable_path));
      if (input.empty()) input = std::string(c.width(), '0');
      if (copies == 0) {
        const DensityState s = run_noisy_circuit(c, eta, input);
        emit({{"expectation", wires_expectation(s, obs.support, obs.matrix())},
              {"residual_trace", s.trace()}});
      } else {
        if (obs.support.size() != 1 || obs.support[0] != kOutputWire) {
          throw ValidationError("with --copies the observable must act on the output wire " +
                                std::to_string(kOutputWire));
        }
        PostselectionOptions po;
        po.circuit_eta = eta;
        po.projection_eta = eta;
        po.copies = copies;
        po.input = input;
        const PostselectionResult r = postselected_expectation(c, po, obs.matrix());
        emit({{"expectation", r.expectation}, {"residual_trace", r.residual_trace}, {"copies", copies}});
      }
    } else if (tile_count->parsed()) {
      const WangTileSet ts = tile_set_from_json(read_json_file(tiles_path));
      json j = {{"rows", rows}, {"cols", cols}};
      const TilingCount z = tiling_count_via_norm(ts, rows, cols, copts);
      j["Z"] = z.z;
      j["residue"] = z.residue;
      if (tile_delta) {
        j["delta"] = *tile_delta;
        j["norm"] = interpolated_norm(ts, rows, cols, *tile_delta, copts);
      }
      if (extrapolate > 0) {
        const Extrapolation ex =
            extrapolate_norm_to_zero(ts, rows, cols, evenly_spaced_open(0.5, 1.0, extrapolate), copts);
        j["extrapolation"] = {{"estimate", ex.estimate},
                              {"deltas", ex.deltas},
                              {"norms", ex.norms},
                              {"condition", ex.condition}};
      }
      emit(j);
    } else if (gen->parsed()) {
      const PepsNetwork net = generate_random_network(rows, cols, bond_dim, phys_dim, delta, globals.seed);
      if (out_path.empty()) {
        emit(to_json(net));
      } else {
        write_json_file(out_path, to_json(net));
        emit({{"out", out_path}, {"injectivity", peps_injectivity(net)}});
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
