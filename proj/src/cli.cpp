#include "swing/cli.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swing/errors.hpp"
#include "swing/io.hpp"

namespace swing {

namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Input, std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size()));
}

// "machine:ddelta:domega", machine 1-based; several specs may be comma-joined.
Disturbance parse_perturbations(const std::vector<std::string>& specs, Index m) {
  Disturbance dist = Disturbance::none(m);
  for (const auto& joined : specs) {
    std::stringstream ss(joined);
    std::string spec;
    while (std::getline(ss, spec, ',')) {
      if (spec.empty()) continue;
      std::vector<std::string> parts;
      std::stringstream ps(spec);
      std::string part;
      while (std::getline(ps, part, ':')) parts.push_back(part);
      if (parts.size() != 3) throw Error(ErrorKind::Input, "perturb spec '" + spec + "' is not machine:ddelta:domega");
      long idx = 0;
      double dd = 0.0, dw = 0.0;
      try {
        idx = std::stol(parts[0]);
        dd = std::stod(parts[1]);
        dw = std::stod(parts[2]);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Input, "perturb spec '" + spec + "' has a non-numeric field");
      }
      if (idx < 1 || idx > m) {
        throw Error(ErrorKind::Input, "perturb machine " + std::to_string(idx) + " outside 1.." + std::to_string(m));
      }
      dist.ddelta(idx - 1) += dd;
      dist.domega(idx - 1) += dw;
    }
  }
  return dist;
}

struct EquilibriumArgs {
  std::string guess;
  int reference = 0;  // 1-based, 0 = last machine

  void add_to(CLI::App* app) {
    app->add_option("--guess", guess, "Comma-separated initial angles for the equilibrium solve (default zeros)");
    app->add_option("--reference", reference, "1-based machine whose angle is pinned (default: last)");
  }

  Equilibrium solve(const SystemCase& sys) const {
    const Index m = sys.size();
    Vec g = Vec::Zero(m);
    if (!guess.empty()) {
      g = to_vec(parse_list(guess, "--guess"));
      if (g.size() != m) throw Error(ErrorKind::Input, "--guess needs " + std::to_string(m) + " angles");
    }
    const Index ref = reference == 0 ? m - 1 : static_cast<Index>(reference - 1);
    return solve_equilibrium(sys, g, ref);
  }
};

void emit(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical-model multi-machine swing dynamics: modal analysis and mean/relative motion checks",
               "swingmodal"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Equilibrium, assumption report and mode table");
  std::string case_path;
  std::string report_path;
  bool paper_form = false;
  EquilibriumArgs eq_args;
  analyze->add_option("case", case_path, "Case file (JSON)")->required();
  analyze->add_option("--out", report_path, "Report file (default: stdout)");
  analyze->add_flag("--paper-form", paper_form, "Use the +c lower-right Jacobian block");
  eq_args.add_to(analyze);

  // verify
  auto* verify = app.add_subcommand("verify", "Run every lemma/claim check; exit 0 on pass, 2 on failure");
  VerifyConfig vcfg;
  bool serial = false;
  verify->add_option("case", case_path, "Case file (JSON)")->required();
  verify->add_option("--samples", vcfg.samples, "Samples per randomized check")->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vcfg.seed, "RNG seed")->capture_default_str();
  verify->add_option("--amplitude", vcfg.amplitude, "Sampling amplitude around equilibrium [rad, rad/s]")
      ->capture_default_str();
  verify->add_option("--tol-structural", vcfg.tol.structural, "Tolerance for exact identities")->capture_default_str();
  verify->add_option("--tol-eigen", vcfg.tol.eigen, "Tolerance for eigenstructure checks")->capture_default_str();
  verify->add_option("--tol-sampled", vcfg.tol.sampled, "Tolerance for sampled nonlinear checks")
      ->capture_default_str();
  verify->add_option("--out", report_path, "Report file (default: stdout)");
  verify->add_flag("--paper-form", paper_form, "Use the +c lower-right Jacobian block");
  verify->add_flag("--serial", serial, "Run sampled checks on one thread");
  eq_args.add_to(verify);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "RK4 time-domain simulation from a disturbed equilibrium");
  std::vector<std::string> perturb;
  double tmax = 10.0;
  double dt = 1e-3;
  bool modal = false;
  bool freeze_mean = false;
  bool zero_mean = false;
  std::string out_path;
  simulate->add_option("case", case_path, "Case file (JSON)")->required();
  simulate->add_option("--perturb", perturb, "machine:ddelta:domega (repeatable, 1-based machine)");
  simulate->add_option("--tmax", tmax, "End time [s]")->required();
  simulate->add_option("--dt", dt, "Step [s]")->required();
  simulate->add_flag("--modal", modal, "Integrate in modal coordinates and export y_k re/im columns");
  simulate->add_flag("--freeze-mean", freeze_mean, "Hold the two mean-motion coordinates at their initial values");
  simulate->add_flag("--zero-mean", zero_mean, "With --freeze-mean: hold them at zero instead");
  simulate->add_option("--out", out_path, "Trajectory CSV")->required();
  eq_args.add_to(simulate);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Frozen-mean discrepancy versus damping-ratio spread");
  std::string spreads;
  sweep->add_option("case", case_path, "Case file (JSON)")->required();
  sweep->add_option("--spreads", spreads, "Comma-separated damping-ratio spreads, e.g. 0,0.25,0.5")->required();
  sweep->add_option("--perturb", perturb, "machine:ddelta:domega (repeatable, 1-based machine)");
  sweep->add_option("--tmax", tmax, "End time [s]")->capture_default_str();
  sweep->add_option("--dt", dt, "Step [s]")->capture_default_str();
  sweep->add_option("--out", out_path, "Sweep CSV")->required();
  eq_args.add_to(sweep);

  // synthesize
  auto* synth = app.add_subcommand("synthesize", "Set Pm so the given angles are an exact equilibrium");
  std::string angles;
  synth->add_option("case", case_path, "Case file (JSON)")->required();
  synth->add_option("--angles", angles, "Comma-separated target angles [rad]")->required();
  synth->add_option("--out", out_path, "Output case file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  const JacobianForm form = paper_form ? JacobianForm::paper_eq4 : JacobianForm::physical;
  try {
    const SystemCase sys = io::load_case(case_path);

    if (analyze->parsed()) {
      const Equilibrium eq = eq_args.solve(sys);
      const JacobianBundle bundle = build_jacobian_any(sys, eq.delta_s, form);
      const AssumptionReport asm_rep = check_assumptions(sys, eq, bundle);
      std::optional<ModalBasis> basis;
      std::string modal_error;
      try {
        basis = eigendecompose(bundle);
      } catch (const Error& e) {
        modal_error = e.what();
      }
      io::ReportInputs in;
      in.sys = &sys;
      in.eq = &eq;
      in.assumptions = &asm_rep;
      in.basis = basis ? &*basis : nullptr;
      in.settings = {{"command", "analyze"},
                     {"jacobian_form", std::string(to_string(form))},
                     {"forced_nonuniform", bundle.forced}};
      json doc = io::build_report(in);
      if (!modal_error.empty()) doc["modal_error"] = modal_error;
      emit(doc, report_path, out);
      for (const auto* a : {&asm_rep.asm1, &asm_rep.asm2, &asm_rep.asm3, &asm_rep.asm4}) {
        err << (a->pass ? "PASS" : "FAIL") << "  Asm. " << a->id << " " << a->name << ": " << a->detail << "\n";
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      vcfg.form = form;
      vcfg.execution = serial ? Execution::serial : Execution::parallel;
      const Equilibrium eq = eq_args.solve(sys);
      vcfg.guess = eq.delta_s;
      vcfg.reference = eq.reference;
      const VerificationReport rep = run_verification(sys, vcfg);
      const JacobianBundle bundle = build_jacobian_any(sys, rep.equilibrium.delta_s, form);
      const ModalBasis basis = eigendecompose(bundle);
      const AssumptionReport asm_rep = check_assumptions(sys, rep.equilibrium, basis);

      io::ReportInputs in;
      in.sys = &sys;
      in.eq = &rep.equilibrium;
      in.basis = &basis;
      in.assumptions = &asm_rep;
      in.verification = &rep;
      in.settings = {{"command", "verify"},
                     {"seed", vcfg.seed},
                     {"samples", vcfg.samples},
                     {"amplitude", vcfg.amplitude},
                     {"jacobian_form", std::string(to_string(form))},
                     {"tolerances",
                      {{"structural", vcfg.tol.structural}, {"eigen", vcfg.tol.eigen}, {"sampled", vcfg.tol.sampled}}},
                     {"reference_machine", eq.reference + 1}};
      emit(io::build_report(in), report_path, out);
      for (const auto& c : rep.checks) {
        err << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  residual=" << c.worst_residual
            << "  tol=" << c.tolerance << "\n";
      }
      err << (rep.overall_pass ? "overall: PASS" : "overall: FAIL") << "\n";
      return rep.overall_pass ? kExitOk : kExitCheckFailed;
    }

    if (simulate->parsed()) {
      const Equilibrium eq = eq_args.solve(sys);
      const Disturbance dist = parse_perturbations(perturb, sys.size());
      const StateVec x0 = dist.apply(eq.delta_s);
      if (modal || freeze_mean) {
        const ModalBasis basis = eigendecompose(build_jacobian_mean_c(sys, eq.delta_s));
        const MeanFreeze mode = !freeze_mean ? MeanFreeze::none
                                : zero_mean  ? MeanFreeze::hold_zero
                                             : MeanFreeze::hold_initial;
        io::save_modal_trajectory_csv(integrate_modal(sys, basis, to_modal(basis, x0), tmax, dt, mode), out_path);
      } else {
        io::save_trajectory_csv(integrate(sys, x0, tmax, dt), out_path);
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      const Equilibrium eq = eq_args.solve(sys);
      const Disturbance dist = parse_perturbations(perturb, sys.size());
      const auto rows = damping_sweep(sys, eq, parse_list(spreads, "--spreads"), dist, tmax, dt);
      std::ostringstream csv;
      csv << "spread,max_pair_discrepancy,max_coi_discrepancy\n";
      for (const auto& r : rows) {
        csv << io::format_double(r.spread) << ',' << io::format_double(r.max_pair) << ','
            << io::format_double(r.max_coi) << '\n';
      }
      io::write_text_file(out_path, csv.str());
      return kExitOk;
    }

    if (synth->parsed()) {
      const Vec target = to_vec(parse_list(angles, "--angles"));
      if (target.size() != sys.size()) {
        throw Error(ErrorKind::Input, "--angles needs " + std::to_string(sys.size()) + " values");
      }
      io::save_case(synthesize_equilibrium(sys, target), out_path);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace swing
