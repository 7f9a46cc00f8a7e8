#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "threept/certify.hpp"
#include "threept/orthoplex.hpp"
#include "threept/serialize.hpp"
#include "threept/solver.hpp"

using namespace threept;

namespace {

Code load_code(const std::string& spec) {
  if (std::filesystem::exists(spec)) return code_of(read_json_file(spec));
  return builtin(spec);
}

/// Potential spec: "t", "t^k", a comma-separated ascending coefficient list
/// of rationals ("0,0,1" = t^2), or "basis:i" for the i-th Hermite basis
/// potential of the given code.
PolyQ parse_potential(const std::string& spec, const Code* code, int mult_zero) {
  if (spec.rfind("basis:", 0) == 0) {
    if (!code) throw CLI::ValidationError("--f", "basis:i needs a code");
    size_t i = std::stoul(spec.substr(6));
    auto squares = squared_inner_products(*code);
    Multiset T = reduction_multiset(squares, mult_zero);
    std::vector<Rational> nodes;
    for (const Quad& z : T.expanded()) nodes.push_back(z.rational_value());
    auto basis = partial_products(nodes);
    if (i >= basis.size())
      throw CLI::ValidationError("--f", "basis index out of range (0.." +
                                            std::to_string(basis.size() - 1) + ")");
    return basis[i];
  }
  if (spec == "t") return PolyQ::variable();
  if (spec.rfind("t^", 0) == 0) {
    int k = std::stoi(spec.substr(2));
    if (k < 0) throw CLI::ValidationError("--f", "negative exponent");
    std::vector<Rational> c(static_cast<size_t>(k) + 1, Rational(0));
    c.back() = 1;
    return PolyQ(std::move(c));
  }
  std::vector<Rational> c;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) c.push_back(parse_rational(tok));
  return PolyQ(std::move(c));
}

std::string poly_str(const PolyQ& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= p.degree(); ++k) {
    Rational c = p.coeff(k);
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0)
      os << "-";
    first = false;
    Rational a = c < 0 ? Rational(-c) : c;
    if (a != 1 || k == 0) os << to_string(a);
    if (k >= 1) {
      if (a != 1) os << "*";
      os << "t";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

EnergyConvention parse_convention(const std::string& s) {
  if (s == "hat") return EnergyConvention::E_hat;
  if (s == "tilde") return EnergyConvention::E_tilde;
  if (s == "e") return EnergyConvention::E;
  throw CLI::ValidationError("--convention", "expected hat, tilde, or e");
}

unsigned default_precision() {
  if (const char* env = std::getenv("THREEPT_PRECISION_BITS")) {
    int v = std::atoi(env);
    if (v >= 64) return static_cast<unsigned>(v);
  }
  return 256;
}

struct BoundInputs {
  Code code;
  DualProgram prog;
  AffineSolution param;
};

BoundInputs build_inputs(const std::string& code_spec, const std::string& f_spec,
                         const Rational& eps, int mult_zero, int sos_degree) {
  BoundInputs in{load_code(code_spec), {}, {}};
  PolyQ f = parse_potential(f_spec, &in.code, mult_zero);
  auto squares = squared_inner_products(in.code);
  Multiset T = reduction_multiset(squares, mult_zero);
  RootMultiset roots;
  for (const auto& [node, mult] : T.entries) roots.emplace_back(node.rational_value(), mult);
  PolyQ f0 = perturb_potential(f, roots, eps);
  in.prog = build_dual_program(in.code.N(), in.code.n, in.code.space, f0, rhombic_blocks(),
                               sos_degree, &in.code);
  in.param = parameterize(in.prog);
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact three-point bounds and universal-optimality certificates"};
  app.require_subcommand(1);

  std::string code_spec, f_spec = "t", convention = "hat", out_path, in_path;
  std::string lambda_path, sdpa_path, cert_path;
  Rational eps(1, 1000);
  std::string eps_str = "1/1000";
  int digits = 8, mult_zero = 3, sos_degree = 7, max_k = 10, jobs = 1;
  unsigned precision = default_precision();

  auto add_code = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--code", code_spec, "builtin code name or JSON code file");
    if (required) opt->required();
  };

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "exact pair energy of a code");
  add_code(energy_cmd);
  energy_cmd->add_option("--f", f_spec, "potential (t, t^k, coefficient list, basis:i)");
  energy_cmd->add_option("--convention", convention, "hat | tilde | e");

  // codes
  auto* codes_cmd = app.add_subcommand("codes", "catalog operations");
  auto* codes_list = codes_cmd->add_subcommand("list", "list builtin codes");
  auto* codes_show = codes_cmd->add_subcommand("show", "print a code as JSON");
  add_code(codes_show);
  auto* codes_verify = codes_cmd->add_subcommand("verify", "check the maximal inner product");
  add_code(codes_verify);
  std::string max_cos2 = "1/3";
  codes_verify->add_option("--max-cos2", max_cos2, "claimed squared maximal inner product");
  codes_cmd->require_subcommand(1);

  // design
  auto* design_cmd = app.add_subcommand("design", "exact design strength");
  add_code(design_cmd);
  design_cmd->add_option("--max-k", max_k, "largest strength tested");

  // orthoplex
  auto* orth_cmd = app.add_subcommand("orthoplex", "orthoplex bound verdict");
  add_code(orth_cmd);

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "Hermite reduction basis for a code");
  add_code(basis_cmd);
  basis_cmd->add_option("--mult-zero", mult_zero, "multiplicity of 0 in the multiset");

  // bound build/solve/round/certify
  auto* bound_cmd = app.add_subcommand("bound", "three-point dual bound pipeline");
  bound_cmd->require_subcommand(1);
  auto add_bound_common = [&](CLI::App* cmd) {
    add_code(cmd);
    cmd->add_option("--f", f_spec, "potential");
    cmd->add_option("--eps", eps_str, "perturbation size");
    cmd->add_option("--mult-zero", mult_zero, "multiplicity of 0 in the multiset");
    cmd->add_option("--sos-degree", sos_degree, "half-degree of the SOS modulus");
  };
  auto* bound_build = bound_cmd->add_subcommand("build", "emit the dual program as JSON");
  add_bound_common(bound_build);
  bound_build->add_option("--out", out_path, "program output path");
  auto* bound_solve = bound_cmd->add_subcommand("solve", "numeric interior-point solve");
  add_bound_common(bound_solve);
  bound_solve->add_option("--precision", precision, "mantissa bits");
  bound_solve->add_option("--out", lambda_path, "free-parameter output path");
  bound_solve->add_option("--sdpa", sdpa_path, "also export the reduced SDP (.dat-s)");
  auto* bound_round = bound_cmd->add_subcommand("round", "round parameters to a certificate");
  add_bound_common(bound_round);
  bound_round->add_option("--lambda", lambda_path, "free parameters (one rational per line)");
  bound_round->add_option("--sdpa-solution", sdpa_path, "or an SDPA solver output file");
  bound_round->add_option("--digits", digits, "rounding denominator 10^digits");
  bound_round->add_option("--out", cert_path, "certificate output path")->required();
  auto* bound_certify = bound_cmd->add_subcommand("certify", "exact certificate verification");
  add_bound_common(bound_certify);
  bound_certify->add_option("--cert", cert_path, "certificate JSON")->required();

  // prove-universal
  auto* prove_cmd = app.add_subcommand("prove-universal",
                                       "full universal-optimality certification");
  add_code(prove_cmd);
  prove_cmd->add_option("--precision", precision, "mantissa bits");
  prove_cmd->add_option("--jobs", jobs, "parallel potential jobs");
  prove_cmd->add_option("--eps", eps_str, "perturbation size");
  prove_cmd->add_option("--mult-zero", mult_zero, "multiplicity of 0 in the multiset");
  prove_cmd->add_option("--out-dir", out_path, "directory for certificate JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    eps = parse_rational(eps_str);

    if (energy_cmd->parsed()) {
      Code code = load_code(code_spec);
      PolyQ f = parse_potential(f_spec, &code, mult_zero);
      std::cout << energy(code, f, parse_convention(convention)) << "\n";
      return 0;
    }

    if (codes_cmd->parsed()) {
      if (codes_list->parsed()) {
        for (const auto& name : builtin_names()) std::cout << name << "\n";
        return 0;
      }
      Code code = load_code(code_spec);
      if (codes_show->parsed()) {
        std::cout << json_of(code).dump(1) << "\n";
        return 0;
      }
      CodeReport rep = verify_code(code, RadScalar::sqrt_nonneg(Quad(parse_rational(max_cos2))));
      std::cout << "max_cos " << rep.max_cos.str() << "\n"
                << (rep.satisfies ? "satisfies" : "exceeds") << " the claimed bound\n";
      return rep.satisfies ? 0 : 1;
    }

    if (design_cmd->parsed()) {
      std::cout << design_strength(load_code(code_spec), max_k) << "\n";
      return 0;
    }

    if (orth_cmd->parsed()) {
      OrthoplexVerdict v = check_code(load_code(code_spec));
      std::cout << "applicable: " << (v.applicable ? "yes" : "no") << "\n"
                << "bound_cos: " << v.bound_cos.str() << "\n";
      if (v.code_max_cos) std::cout << "code_max_cos: " << v.code_max_cos->str() << "\n";
      std::cout << "status: " << to_string(v.status) << "\n";
      return v.status == OrthoplexStatus::violates ? 1 : 0;
    }

    if (basis_cmd->parsed()) {
      Code code = load_code(code_spec);
      Multiset T = reduction_multiset(squared_inner_products(code), mult_zero);
      std::vector<Rational> nodes;
      for (const Quad& z : T.expanded()) nodes.push_back(z.rational_value());
      auto basis = partial_products(nodes);
      for (size_t i = 0; i < basis.size(); ++i)
        std::cout << "basis:" << i << "  " << poly_str(basis[i]) << "\n";
      return 0;
    }

    if (bound_cmd->parsed()) {
      if (bound_build->parsed()) {
        BoundInputs in = build_inputs(code_spec, f_spec, eps, mult_zero, sos_degree);
        std::cout << "unknowns: " << in.prog.unknown_count() << "\n"
                  << "constraints: " << in.prog.constraints.size() << "\n"
                  << "free parameters: " << in.param.basis.cols() << "\n";
        if (!out_path.empty()) write_json_file(json_of(in.prog), out_path);
        return 0;
      }
      if (bound_solve->parsed()) {
        BoundInputs in = build_inputs(code_spec, f_spec, eps, mult_zero, sos_degree);
        SdpProblem sdp = reduce_program(in.prog, in.param);
        if (!sdpa_path.empty()) sdpa_export(sdp, sdpa_path);
        SolveOptions sopts;
        sopts.precision_bits = precision;
        SolveResult res = solve_numeric(sdp, sopts);
        std::cout << (res.feasible ? "feasible" : "infeasible") << " after " << res.iterations
                  << " iterations: " << res.message << "\n";
        if (!res.feasible) return 1;
        if (!lambda_path.empty()) {
          std::ofstream out(lambda_path);
          for (const Rational& l : res.lambda) out << to_string(l) << "\n";
          std::cout << "wrote " << res.lambda.size() << " parameters to " << lambda_path << "\n";
        }
        return 0;
      }
      if (bound_round->parsed()) {
        BoundInputs in = build_inputs(code_spec, f_spec, eps, mult_zero, sos_degree);
        std::vector<Rational> lambda;
        if (!lambda_path.empty()) {
          std::ifstream is(lambda_path);
          if (!is) throw std::runtime_error("cannot read " + lambda_path);
          std::string line;
          while (std::getline(is, line))
            if (!line.empty()) lambda.push_back(parse_rational(line));
        } else if (!sdpa_path.empty()) {
          lambda = sdpa_import_solution(sdpa_path,
                                        static_cast<int>(in.param.basis.cols()));
        } else {
          throw std::runtime_error("bound round needs --lambda or --sdpa-solution");
        }
        Certificate cert = round_certificate(in.prog, in.param, lambda, digits);
        write_json_file(json_of(cert), cert_path);
        std::cout << "wrote certificate to " << cert_path << "\n";
        return 0;
      }
      if (bound_certify->parsed()) {
        BoundInputs in = build_inputs(code_spec, f_spec, eps, mult_zero, sos_degree);
        Certificate cert = certificate_of(read_json_file(cert_path));
        PolyQ f = parse_potential(f_spec, &in.code, mult_zero);
        Rational target = energy(in.code, f, EnergyConvention::E_hat).rational_value();
        VerificationReport rep = verify_certificate(cert, in.prog, target);
        for (const auto& [name, ok] : rep.psd_results)
          std::cout << name << " PSD: " << (ok ? "yes" : "NO") << "\n";
        std::cout << "identity: " << (rep.identity_ok ? "yes" : "NO") << "\n"
                  << "slackness: " << (rep.slackness_ok ? "yes" : "NO") << "\n"
                  << "tangency: " << (rep.tangency_ok ? "yes" : "NO") << "\n"
                  << "bound: " << to_string(rep.bound) << " (target " << to_string(rep.target)
                  << ")\n"
                  << (rep.sharp ? "certificate is sharp" : "certificate FAILS") << "\n";
        for (const auto& f_msg : rep.failures) std::cout << "  " << f_msg << "\n";
        return rep.sharp ? 0 : 1;
      }
    }

    if (prove_cmd->parsed()) {
      Code code = load_code(code_spec);
      PipelineOptions opts;
      opts.precision_bits = precision;
      opts.jobs = jobs;
      opts.eps = eps;
      opts.mult_zero = mult_zero;
      PipelineReport report = universal_optimality_pipeline(code, opts);
      std::cout << format_report(report);
      if (!out_path.empty()) {
        std::filesystem::create_directories(out_path);
        for (size_t i = 0; i < report.potentials.size(); ++i)
          if (report.potentials[i].certificate)
            write_json_file(json_of(*report.potentials[i].certificate),
                            out_path + "/certificate_" + std::to_string(i) + ".json");
      }
      return report.certified ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
