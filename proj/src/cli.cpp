#include "doeblin/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "doeblin/bayes_net.hpp"
#include "doeblin/channel_io.hpp"
#include "doeblin/coefficients.hpp"
#include "doeblin/coupling.hpp"
#include "doeblin/coupling_verify.hpp"
#include "doeblin/degroot.hpp"
#include "doeblin/error.hpp"
#include "doeblin/fusion.hpp"
#include "doeblin/json_out.hpp"
#include "doeblin/kernels.hpp"
#include "doeblin/lp_oracle.hpp"

namespace doeblin {

namespace {

std::vector<double> as_vector(const Pmf& p) { return {p.probs().begin(), p.probs().end()}; }

ojson verification_json(const VerificationReport& r, std::size_t n) {
  ojson j;
  j["expanded"] = r.expanded;
  j["weight_sum"] = r.weight_sum;
  j["max_marginal_residual"] = r.max_marginal_residual;
  j["min_mass"] = r.min_mass;
  j["total_mass"] = r.total_mass;
  j["diagonal_mass"] = r.diagonal;
  j["union_mass"] = r.union_mass;
  j["orthogonal_components"] = r.orthogonal;
  if (r.expanded) j["structural_vs_expanded_gap"] = r.route_gap;
  ojson inter = ojson::array();
  for (unsigned mask = 1; mask < r.intersections.size(); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    ojson e;
    e["coordinates"] = mask_label(mask, n);
    e["mass"] = r.intersections[mask];
    inter.push_back(e);
  }
  j["intersection_masses"] = inter;
  return j;
}

std::vector<JointPmf> read_joints(const std::vector<std::string>& paths) {
  std::vector<JointPmf> out;
  for (const auto& path : paths) {
    const auto j = parse_json_text(read_text_file(path), path);
    if (!j.is_object() || !j.contains("joints") || !j.at("joints").is_array())
      throw ValidationError(path + ": joint input needs {\"joints\": [matrix, ...]}");
    for (const auto& mat : j.at("joints")) {
      if (!mat.is_array() || mat.empty()) throw ValidationError("each joint must be a nonempty matrix");
      const std::size_t nx = mat.size(), ny = mat.front().size();
      std::vector<double> flat;
      for (const auto& row : mat) {
        if (!row.is_array() || row.size() != ny) throw ValidationError("joint rows must have equal length");
        for (const auto& x : row) {
          if (!x.is_number()) throw ValidationError("joint entries must be numbers");
          flat.push_back(x.get<double>());
        }
      }
      out.emplace_back(nx, ny, Pmf(std::move(flat)));
    }
  }
  return out;
}

std::vector<std::size_t> parse_targets(const BayesNet& net, const std::string& arg) {
  std::vector<std::size_t> v;
  std::stringstream ss(arg);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    v.push_back(net.index_of(name));
  }
  if (v.empty()) throw ValidationError("--target needs at least one node name");
  return node_set(v);
}

ojson names(const BayesNet& net, const std::vector<std::size_t>& v) {
  ojson a = ojson::array();
  for (std::size_t u : v) a.push_back(net.node(u).name);
  return a;
}

LossMatrix parse_loss(const std::string& arg, std::size_t n) {
  if (arg == "id") return LossMatrix::identity(n);
  if (arg == "complement") return LossMatrix::complement(n);
  const auto j = parse_json_text(arg, "--loss");
  if (!j.is_array()) throw ValidationError("--loss must be id, complement, or a JSON matrix");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ValidationError("--loss matrix rows must be arrays");
    std::vector<double> row;
    for (const auto& x : r) {
      if (!x.is_number()) throw ValidationError("--loss entries must be numbers");
      row.push_back(x.get<double>());
    }
    rows.push_back(row);
  }
  LossMatrix l(rows);
  if (l.n != n) throw ValidationError("--loss matrix size differs from the number of hypotheses");
  return l;
}

ojson risk_block(const Pmf& prior, const Channel& w, const LossMatrix& loss) {
  const std::size_t n = w.inputs();
  double no_data = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += loss(i, j) * prior[i];
    if (j == 0 || v < no_data) no_data = v;
  }
  const Channel est = bayes_estimator(prior, w, loss);
  ojson r;
  r["risk_without_observation"] = no_data;
  r["bayes_risk"] = risk(prior, w, loss, est);
  r["estimator"] = to_json(est);
  return r;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Doeblin coefficients, extremal couplings and contraction bounds for finite channels", "doeblin"};
  app.require_subcommand(1);

  // coef
  auto* coef = app.add_subcommand("coef", "coefficient report for a channel");
  std::string coef_path;
  bool coef_split = false;
  double coef_eps = -1.0;
  coef->add_option("channel", coef_path, "channel file (JSON or CSV)")->required();
  coef->add_flag("--split", coef_split, "include the minorization split");
  coef->add_option("--degrade", coef_eps, "erasure probability for the degradation channel");

  // couple
  auto* couple = app.add_subcommand("couple", "construct an extremal coupling");
  std::string kind;
  std::vector<std::string> couple_inputs;
  bool couple_expand = false;
  couple->add_option("--kind", kind, "max | min | min3 | joint")
      ->required()
      ->check(CLI::IsMember({"max", "min", "min3", "joint"}));
  couple->add_option("inputs", couple_inputs, "PMF files, or a joints file for --kind joint")->required();
  couple->add_flag("--expand", couple_expand, "attach the expanded sparse table");

  // degroot
  auto* dg = app.add_subcommand("degroot", "DeGroot distances and Bayes risks");
  std::string prior_text, dg_path, loss_arg;
  dg->add_option("--prior", prior_text, "prior as an inline JSON array")->required();
  dg->add_option("channel", dg_path, "channel file")->required();
  dg->add_option("--loss", loss_arg, "id | complement | inline JSON matrix");

  // bayesnet
  auto* bn = app.add_subcommand("bayesnet", "contraction bounds on a Bayesian network");
  std::string net_path, target_list, bound = "all", node_name;
  std::vector<std::uint64_t> mc;
  bn->add_option("network", net_path, "network JSON")->required();
  bn->add_option("--target", target_list, "comma-separated node names")->required();
  bn->add_option("--bound", bound, "recursion | perc | sfpaths | all")
      ->check(CLI::IsMember({"recursion", "perc", "sfpaths", "all"}));
  bn->add_option("--mc", mc, "Monte Carlo percolation: samples seed")->expected(2);
  bn->add_option("--node", node_name, "node u for the recursion bound");

  // fuse
  auto* fuse = app.add_subcommand("fuse", "min-rule fusion of PMFs");
  std::vector<std::string> fuse_inputs;
  fuse->add_option("inputs", fuse_inputs, "PMF files")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "LP oracle against the closed forms");
  std::string problem, sense_text;
  bool exact = false, witness = false;
  std::vector<std::string> ver_inputs;
  ver->add_option("--problem", problem, "diag | union | estimator")
      ->required()
      ->check(CLI::IsMember({"diag", "union", "estimator"}));
  ver->add_option("--sense", sense_text, "min | max")->check(CLI::IsMember({"min", "max"}));
  ver->add_flag("--exact", exact, "solve in exact rational arithmetic");
  ver->add_flag("--witness", witness, "include the optimal witness");
  ver->add_option("inputs", ver_inputs, "PMF files, or a channel file for estimator")->required();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    ojson j;
    if (*coef) {
      const Channel w = read_channel_file(coef_path);
      j["inputs"] = w.inputs();
      j["outputs"] = w.outputs();
      const ojson rj = to_json(report(w));
      for (auto it = rj.begin(); it != rj.end(); ++it) j[it.key()] = it.value();
      const TraceResult lo = min_trace(w), hi = max_trace(w);
      j["min_trace"] = {{"value", lo.value}, {"argmin", to_json(lo.estimator)}};
      j["max_trace"] = {{"value", hi.value}, {"argmax", to_json(hi.estimator)}};
      if (coef_split) {
        const MinorizationSplit s = minorization_split(w);
        ojson sp;
        sp["alpha"] = s.alpha;
        sp["mu"] = to_json(as_vector(s.mu));
        sp["mu_degenerate"] = s.mu_degenerate;
        sp["residual"] = to_json(s.residual);
        sp["residual_degenerate"] = s.residual_degenerate;
        j["minorization"] = sp;
      }
      if (coef->count("--degrade")) {
        const Channel d = erasure_degradation(w, coef_eps);
        j["degradation"] = {{"epsilon", coef_eps}, {"channel", to_json(d)}};
      }
    } else if (*couple) {
      j["kind"] = kind;
      if (kind == "joint") {
        const auto joints = read_joints(couple_inputs);
        const JointCoupling jc = simultaneous_joint_coupling(joints);
        const std::size_t n = jc.arity, k = jc.nx * jc.ny;
        std::vector<std::vector<double>> marg(n, std::vector<double>(k, 0.0));
        double pair_diag = 0.0, x_diag = 0.0, total = 0.0;
        for (const auto& [key, mass] : jc.table) {
          const auto t = decode_tuple(key, n, k);
          bool sp = true, sx = true;
          for (std::size_t i = 0; i < n; ++i) {
            marg[i][t[i]] += mass;
            sp = sp && t[i] == t[0];
            sx = sx && t[i] / jc.ny == t[0] / jc.ny;
          }
          total += mass;
          if (sp) pair_diag += mass;
          if (sx) x_diag += mass;
        }
        double resid = 0.0;
        std::vector<Pmf> flats, xs;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t t = 0; t < k; ++t) resid = std::max(resid, std::abs(marg[i][t] - joints[i].flat[t]));
          flats.push_back(joints[i].flat);
          xs.push_back(Pmf::from_weights(joints[i].x_marginal()));
        }
        j["arity"] = n;
        j["x_alphabet"] = jc.nx;
        j["y_alphabet"] = jc.ny;
        j["weights"] = {{"pair_diagonal", jc.w_diagonal}, {"x_glued", jc.w_x_glued}, {"product", jc.w_product}};
        j["x_glued_dropped"] = jc.trivial;
        j["pair_agreement"] = pair_diag;
        j["x_agreement"] = x_diag;
        j["tau_joints"] = doeblin_coef(flats);
        j["tau_x_marginals"] = doeblin_coef(xs);
        j["total_mass"] = total;
        j["max_marginal_residual"] = resid;
        ojson tab = ojson::array();
        for (const auto& [key, mass] : jc.table) {
          ojson e;
          ojson pairs = ojson::array();
          for (std::size_t s : decode_tuple(key, n, k)) pairs.push_back({s / jc.ny, s % jc.ny});
          e["pairs"] = pairs;
          e["mass"] = mass;
          tab.push_back(e);
        }
        j["expanded"] = tab;
      } else {
        const std::vector<Pmf> ps = read_pmf_files(couple_inputs);
        Coupling c = kind == "max"   ? maximal_coupling(ps)
                     : kind == "min" ? minimal_coupling_max(ps)
                                     : minimal_coupling_max_n3(ps);
        const std::size_t cap = expansion_cap();
        if (couple_expand) c.expanded = expand(c, cap);
        const VerificationReport r = verify_coupling(c, ps, cap);
        j["coupling"] = to_json(c);
        if (kind == "max") {
          j["value"] = r.diagonal;
          j["closed_form"] = doeblin_coef(ps);
        } else if (kind == "min") {
          j["value"] = r.union_mass;
          j["closed_form"] = max_doeblin(ps);
        } else {
          j["value"] = r.union_mass;
          j["closed_form"] = minimal_union_value_n3(ps);
        }
        j["verification"] = verification_json(r, c.arity);
        if (!r.expanded) err << "note: alphabet^arity exceeds the expansion cap; verified structured form only\n";
      }
    } else if (*dg) {
      const Channel w = read_channel_file(dg_path);
      const auto pj = parse_json_text(prior_text, "--prior");
      if (!pj.is_array()) throw ValidationError("--prior must be a JSON array");
      std::vector<double> pv;
      for (const auto& x : pj) {
        if (!x.is_number()) throw ValidationError("--prior entries must be numbers");
        pv.push_back(x.get<double>());
      }
      const Pmf prior(pv);
      j["min_degroot"] = min_degroot(prior, w);
      j["max_degroot"] = max_degroot(prior, w);
      if (loss_arg.empty()) {
        j["risk_identity_loss"] = risk_block(prior, w, LossMatrix::identity(w.inputs()));
        j["risk_complement_loss"] = risk_block(prior, w, LossMatrix::complement(w.inputs()));
      } else {
        j["loss"] = loss_arg;
        j["risk"] = risk_block(prior, w, parse_loss(loss_arg, w.inputs()));
      }
    } else if (*bn) {
      const BayesNet net = BayesNet::from_json(parse_json_text(read_text_file(net_path), net_path));
      const auto v = parse_targets(net, target_list);
      j["source"] = net.node(net.source()).name;
      j["target"] = names(net, v);
      ojson taus;
      for (std::size_t u = 0; u < net.size(); ++u)
        if (u != net.source()) taus[net.node(u).name] = node_tau(net, u);
      j["node_tau"] = taus;
      const double tau_v = doeblin_coef(composite_channel(net, v));
      j["tau"] = tau_v;
      j["one_minus_tau"] = 1.0 - tau_v;
      const bool all = bound == "all";
      if (all || bound == "perc") {
        const PercolationResult p = percolation_exact(net, v);
        ojson pj2;
        pj2["method"] = "exact";
        pj2["probability"] = p.probability;
        pj2["relevant_nodes"] = p.relevant_nodes;
        j["percolation"] = pj2;
        if (!mc.empty()) {
          const PercolationResult q = percolation_mc(net, v, mc[0], mc[1]);
          ojson mj;
          mj["method"] = "monte_carlo";
          mj["probability"] = q.probability;
          mj["samples"] = q.samples;
          mj["seed"] = q.seed;
          mj["std_error"] = q.std_error;
          j["percolation_mc"] = mj;
        }
      }
      if (all || bound == "sfpaths") {
        const PathBound pb = shortcut_free_bound(net, v);
        ojson paths = ojson::array();
        for (const auto& p : pb.paths) paths.push_back(names(net, p));
        j["shortcut_free"] = {{"bound", pb.bound}, {"paths", paths}};
      }
      if (all || bound == "recursion") {
        if (node_name.empty()) {
          if (!all) throw ValidationError("--bound recursion needs --node");
          err << "note: recursion bound skipped (no --node given)\n";
        } else {
          const std::size_t u = net.index_of(node_name);
          std::vector<std::size_t> vu = v;
          vu.push_back(u);
          ojson rj;
          rj["node"] = node_name;
          rj["bound"] = recursion_bound(net, v, u);
          rj["tau_with_node"] = doeblin_coef(composite_channel(net, node_set(vu)));
          j["recursion"] = rj;
        }
      }
    } else if (*fuse) {
      const FusionResult f = fuse_min(read_pmf_files(fuse_inputs));
      j["fused"] = to_json(as_vector(f.fused));
      j["agreement"] = f.agreement;
    } else if (*ver) {
      j["problem"] = problem;
      if (problem == "estimator") {
        const Channel w = read_channel_file(ver_inputs.at(0));
        if (ver_inputs.size() != 1) throw ValidationError("verify --problem estimator takes one channel file");
        const Sense s = sense_text == "max" ? Sense::Max : Sense::Min;
        j["sense"] = s == Sense::Max ? "max" : "min";
        const EstimatorResult e = estimator_opt(w, s);
        const OracleResult lp = estimator_lp(w, s, exact);
        const double closed = (s == Sense::Min ? doeblin_coef(w) : max_doeblin(w)) / static_cast<double>(w.inputs());
        j["value"] = e.value;
        j["lp_value"] = lp.value;
        j["dual_value"] = lp.dual_value;
        j["closed_form"] = closed;
        j["gap"] = std::abs(e.value - closed);
        j["lp_gap"] = std::abs(lp.value - closed);
        j["max_residual"] = lp.max_residual;
        if (exact) j["exact_value"] = lp.exact_value;
        if (witness) j["witness"] = to_json(e.witness);
      } else {
        const std::vector<Pmf> ps = read_pmf_files(ver_inputs);
        if (ps.size() < 2) throw ValidationError("verify needs at least two PMFs");
        const bool diag = problem == "diag";
        const Sense s = sense_text.empty() ? (diag ? Sense::Max : Sense::Min)
                                           : (sense_text == "max" ? Sense::Max : Sense::Min);
        j["sense"] = s == Sense::Max ? "max" : "min";
        const OracleResult r = diag ? coupling_diag_opt(ps, s, exact) : coupling_union_opt(ps, s, exact);
        j["value"] = r.value;
        j["dual_value"] = r.dual_value;
        std::optional<double> closed;
        std::string note;
        if (diag && s == Sense::Max) {
          closed = doeblin_coef(ps);
        } else if (!diag && s == Sense::Min) {
          const double t2 = max2_doeblin(ps);
          if (t2 <= 1.0 + 1e-12)
            closed = max_doeblin(ps);
          else if (ps.size() == 3)
            closed = minimal_union_value_n3(ps);
          else
            note = "empirical LP optimum; no closed form known for n >= 4 when the second-max coefficient exceeds 1";
        } else {
          note = "no closed form for this objective and sense";
        }
        if (closed) {
          j["closed_form"] = *closed;
          j["gap"] = std::abs(r.value - *closed);
        } else {
          j["closed_form"] = nullptr;
          j["gap"] = nullptr;
          j["note"] = note;
          err << "note: " << note << "\n";
        }
        j["max_residual"] = r.max_residual;
        j["min_mass"] = r.min_mass;
        if (exact) j["exact_value"] = r.exact_value;
        if (witness) j["witness"] = to_json(r.witness, ps.size(), ps.front().size());
      }
    }
    out << dump_json(j);
    return 0;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace doeblin
