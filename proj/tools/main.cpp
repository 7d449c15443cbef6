// Command-line front door for the stochcube library: batch computation on
// tensor documents, including the mutation-scenario workflow (act on a
// cubic stochastic matrix, inspect marginals, build the induced bivariate
// Markov chain, iterate it).
//
// Exit codes: 0 success, 2 validation/domain failure, 3 shape or parse
// failure, 4 usage error.

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <stochcube/stochcube.hpp>

namespace {

using namespace stochcube;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_decimal(const std::string& s, const char* what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw UsageError(std::string(what) + ": not a decimal number: " + s);
  }
  return v;
}

std::vector<double> parse_decimal_list(const std::string& s,
                                       const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = s.find(',', pos);
    std::string cell = s.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(parse_decimal(cell, what));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// --rule accepts "dot", "star", or "w <l1> <l2>".
MulRule parse_rule(const std::vector<std::string>& tokens, Tolerance tol) {
  if (tokens.empty()) throw UsageError("--rule: missing value");
  if (tokens[0] == "dot") {
    if (tokens.size() != 1) throw UsageError("--rule dot takes no weights");
    return MulRule::dot();
  }
  if (tokens[0] == "star") {
    if (tokens.size() != 1) throw UsageError("--rule star takes no weights");
    return MulRule::star();
  }
  if (tokens[0] == "w") {
    if (tokens.size() != 3) {
      throw UsageError("--rule w requires two weights: --rule w <l1> <l2>");
    }
    return MulRule::weighted(Weights(parse_decimal(tokens[1], "--rule"),
                                     parse_decimal(tokens[2], "--rule"),
                                     tol));
  }
  throw UsageError("--rule: expected dot, star, or w: got " + tokens[0]);
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << io::render(j);
  } else {
    io::save_document(out_path, j);
  }
}

json marginals_doc(const CubicStochastic12& p) {
  json j;
  j["kind"] = "marginals";
  j["n"] = p.n();
  j["first"] = io::doc(accompanying_first(p));
  j["second"] = io::doc(accompanying_second(p));
  return j;
}

json slices_doc(const CubicStochastic12& p) {
  json j;
  j["kind"] = "slices";
  j["axis"] = "frontal";
  j["n"] = p.n();
  j["slices"] = json::array();
  for (int k = 0; k < p.n(); ++k) {
    j["slices"].push_back(slice(p.grid(), SliceAxis::Frontal, k).values());
  }
  return j;
}

json iterate_doc(const IterateResult& res) {
  json j;
  j["kind"] = "iterate-result";
  j["converged"] = res.converged;
  j["steps"] = res.steps;
  j["state"] = io::doc(res.state);
  return j;
}

std::vector<double> lambda_from_json(const json& arr, const char* where) {
  if (!arr.is_array()) {
    throw ParseError(std::string(where) + ": lambda must be an array of rows");
  }
  std::vector<double> out;
  for (const auto& row : arr) {
    if (!row.is_array()) {
      throw ParseError(std::string(where) + ": lambda rows must be arrays");
    }
    for (const auto& v : row) {
      if (!v.is_number()) {
        throw ParseError(std::string(where) + ": non-numeric lambda entry");
      }
      out.push_back(v.get<double>());
    }
  }
  return out;
}

ChainKind parse_which(const std::string& which) {
  if (which == "q1") return ChainKind::Q1;
  if (which == "q2") return ChainKind::Q2;
  if (which == "q3") return ChainKind::Q3;
  throw UsageError("--which: expected q1, q2, or q3: got " + which);
}

// validate subcommand: runs the named check against a document. The
// document's own kind is not required to match the check (so a "raw" grid
// can be probed for any stochasticity type); shape must fit.
int run_validate(const std::string& path, const std::string& kind,
                 std::optional<double> eps) {
  json j = io::load_json(path);
  const std::string doc_kind = j.contains("kind") && j["kind"].is_string()
                                   ? j["kind"].get<std::string>()
                                   : "";
  Tolerance tol = eps ? Tolerance(*eps) : Tolerance{};
  ValidationReport report;
  int n = 0;
  if (kind == "ns") {
    Matrix m = io::detail::matrix_from_doc(j, path);
    n = m.rows();
    report = validate_column_stochastic(m, tol);
  } else if (kind == "cs12" || kind == "3stoch" || kind == "t23" ||
             kind == "t13") {
    Cubic g = io::detail::cubic_from_doc(j, path);
    n = g.n();
    CubicKind ck = kind == "cs12"     ? CubicKind::Type12
                   : kind == "3stoch" ? CubicKind::ThreeStochastic
                   : kind == "t23"    ? CubicKind::Type23
                                      : CubicKind::Type13;
    report = validate_cubic(g, ck, tol);
  } else if (kind == "raw") {
    const int order = io::detail::get_int(j, "order", path);
    if (order == 2) {
      n = io::detail::matrix_from_doc(j, path).rows();
    } else if (order == 3) {
      n = io::detail::cubic_from_doc(j, path).n();
    } else {
      throw ShapeError("raw documents must have order 2 or 3: " + path);
    }
  } else if (kind == "simplex") {
    SimplexVector x = io::load_simplex(path, eps);
    n = x.n();
  } else if (kind == "bmc") {
    BlockModel m = io::load_model(path, eps);
    n = m.n();
  } else if (kind == "state") {
    StackedState x = io::load_state(path, eps);
    n = x.n();
  } else if (kind == "marginals") {
    if (doc_kind != "marginals" || !j.contains("first") ||
        !j.contains("second")) {
      throw ParseError("not a marginals document: " + path);
    }
    for (const char* part : {"first", "second"}) {
      Matrix m = io::detail::matrix_from_doc(j[part], path);
      n = m.rows();
      report = validate_column_stochastic(m, tol);
      if (!report) break;
    }
  } else {
    throw UsageError("--kind: unknown kind " + kind);
  }
  if (!report) {
    std::cout << "invalid " << kind << ": " << report.message << "\n";
    return 2;
  }
  std::cout << "ok: " << kind << " n=" << n << "\n";
  return 0;
}

void run_scenario(const std::string& config_path, std::optional<double> eps) {
  json cfg = io::load_json(config_path);
  if (!cfg.contains("tensor") || !cfg["tensor"].is_string()) {
    throw ParseError("scenario config missing \"tensor\" path: " + config_path);
  }
  Tolerance tol = eps ? Tolerance(*eps) : Tolerance{};
  CubicStochastic12 cur = io::load_cubic12(cfg["tensor"].get<std::string>(), eps);

  if (cfg.contains("operations")) {
    if (!cfg["operations"].is_array()) {
      throw ParseError("scenario \"operations\" must be an array");
    }
    for (const auto& op : cfg["operations"]) {
      if (!op.is_object() || !op.contains("op") || !op["op"].is_string()) {
        throw ParseError("scenario operation missing \"op\" name");
      }
      const std::string name = op["op"].get<std::string>();
      if (name == "mul") {
        const std::string rule_name = op.value("rule", std::string("dot"));
        MulRule rule = MulRule::dot();
        if (rule_name == "dot") {
          rule = MulRule::dot();
        } else if (rule_name == "star") {
          rule = MulRule::star();
        } else if (rule_name == "w") {
          rule = MulRule::weighted(Weights(op.value("lambda1", -1.0),
                                           op.value("lambda2", -1.0), tol));
        } else {
          throw ParseError("scenario mul: unknown rule " + rule_name);
        }
        if (!op.contains("operand") || !op["operand"].is_string()) {
          throw ParseError("scenario mul: missing \"operand\" path");
        }
        CubicStochastic12 rhs =
            io::load_cubic12(op["operand"].get<std::string>(), eps);
        cur = mul(cur, rhs, rule);
      } else if (name == "act") {
        const int side = op.value("side", 0);
        if (side != 1 && side != 2) {
          throw ParseError("scenario act: \"side\" must be 1 or 2");
        }
        if (!op.contains("matrix") || !op["matrix"].is_string()) {
          throw ParseError("scenario act: missing \"matrix\" path");
        }
        StochasticMatrix a =
            io::load_stochastic_matrix(op["matrix"].get<std::string>(), eps);
        cur = act(a, cur, side == 1 ? ActionSide::First : ActionSide::Second);
      } else if (name == "power") {
        const int m = op.value("m", 0);
        const std::string rule_name = op.value("rule", std::string("dot"));
        MulRule rule = rule_name == "dot"    ? MulRule::dot()
                       : rule_name == "star" ? MulRule::star()
                       : rule_name == "w"
                           ? MulRule::weighted(Weights(op.value("lambda1", -1.0),
                                                       op.value("lambda2", -1.0),
                                                       tol))
                           : throw ParseError("scenario power: unknown rule " +
                                              rule_name);
        cur = power(cur, m, rule);
      } else if (name == "transpose") {
        cur = transpose12(cur);
      } else {
        throw ParseError("scenario: unknown op " + name);
      }
    }
  }

  if (!cfg.contains("outputs")) return;
  const json& outs = cfg["outputs"];
  if (!outs.is_object()) throw ParseError("scenario \"outputs\" must be an object");

  if (outs.contains("result")) {
    io::save_document(outs["result"].get<std::string>(), io::doc(cur));
  }
  if (outs.contains("marginals")) {
    io::save_document(outs["marginals"].get<std::string>(), marginals_doc(cur));
  }
  if (outs.contains("slices")) {
    io::save_document(outs["slices"].get<std::string>(), slices_doc(cur));
  }
  if (outs.contains("matricization")) {
    io::save_matricized_csv(outs["matricization"].get<std::string>(),
                            cur.grid());
  }
  if (outs.contains("bmc")) {
    const json& section = outs["bmc"];
    std::vector<double> lambda =
        lambda_from_json(section.at("lambda"), "scenario bmc");
    BlockModel model = build_bivariate(cur, lambda, tol);
    if (section.contains("mutate")) {
      StochasticMatrix a =
          io::load_stochastic_matrix(section["mutate"].get<std::string>(), eps);
      model = induced_chain(a, cur, lambda,
                            parse_which(section.value("which", std::string("q3"))),
                            tol);
    }
    io::save_document(section.at("path").get<std::string>(), io::doc(model));
  }
  if (outs.contains("iterate")) {
    const json& section = outs["iterate"];
    std::vector<double> lambda =
        lambda_from_json(section.at("lambda"), "scenario iterate");
    BlockModel model = build_bivariate(cur, lambda, tol);
    StackedState x0;
    if (section.contains("x0") && section["x0"].is_string()) {
      x0 = io::load_state(section["x0"].get<std::string>(), eps);
    } else if (section.contains("x0") && section["x0"].is_array()) {
      for (const auto& part : section["x0"]) {
        std::vector<double> vals;
        for (const auto& v : part) vals.push_back(v.get<double>());
        x0.parts.emplace_back(std::move(vals), tol);
      }
    } else {
      throw ParseError("scenario iterate: missing \"x0\"");
    }
    IterateResult res = iterate(model, x0, section.value("max_steps", 10000),
                                section.value("tol", 1e-10));
    io::save_document(section.at("path").get<std::string>(), iterate_doc(res));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubic stochastic matrix toolbox"};
  app.require_subcommand(1);
  app.fallthrough();

  double eps_value = 0.0;
  auto* eps_opt = app.add_option(
      "--eps", eps_value, "tolerance override for all validation checks");

  // Shared option storage; only the parsed subcommand reads it.
  std::string in_a, in_b, out_path, csv_path, kind, axis = "frontal";
  std::string x_list, sigma_list, x0_path, which = "q3";
  std::vector<std::string> rule_tokens{"dot"};
  std::vector<double> lambda4;
  int side = 0, index = 0, m_exp = 0, max_steps = 10000;
  double tol_value = 1e-10;
  bool mutate_given = false;
  std::string mutate_path;

  auto* c_validate = app.add_subcommand("validate", "check a document");
  c_validate->add_option("file", in_a)->required();
  c_validate->add_option("--kind", kind,
                         "ns|cs12|3stoch|t23|t13|raw|simplex|bmc|state|marginals")
      ->required();

  auto* c_mul = app.add_subcommand("mul", "multiply two cs12 tensors");
  c_mul->add_option("lhs", in_a)->required();
  c_mul->add_option("rhs", in_b)->required();
  c_mul->add_option("--rule", rule_tokens, "dot | star | w <l1> <l2>")
      ->expected(1, 3);
  c_mul->add_option("-o,--out", out_path);

  auto* c_act = app.add_subcommand("act", "act with a stochastic matrix");
  c_act->add_option("matrix", in_a)->required();
  c_act->add_option("tensor", in_b)->required();
  c_act->add_option("--side", side, "1 (first index) or 2 (second index)")
      ->required();
  c_act->add_option("-o,--out", out_path);

  auto* c_power = app.add_subcommand("power", "m-th power under a rule");
  c_power->add_option("tensor", in_a)->required();
  c_power->add_option("-m", m_exp)->required();
  c_power->add_option("--rule", rule_tokens)->expected(1, 3);
  c_power->add_option("-o,--out", out_path);

  auto* c_transpose = app.add_subcommand("transpose", "(1,2)-transpose");
  c_transpose->add_option("tensor", in_a)->required();
  c_transpose->add_option("-o,--out", out_path);

  auto* c_marginals =
      app.add_subcommand("marginals", "both accompanying matrices");
  c_marginals->add_option("tensor", in_a)->required();
  c_marginals->add_option("-o,--out", out_path);

  auto* c_slice = app.add_subcommand("slice", "extract one slice");
  c_slice->add_option("tensor", in_a)->required();
  c_slice->add_option("--axis", axis, "frontal|horizontal|lateral");
  c_slice->add_option("--index", index, "1-based slice index")->required();
  c_slice->add_option("-o,--out", out_path);

  auto* c_matricize =
      app.add_subcommand("matricize", "frontal unfolding as CSV");
  c_matricize->add_option("tensor", in_a)->required();
  c_matricize->add_option("--csv", csv_path, "output CSV path (default stdout)");

  auto* c_bmc = app.add_subcommand("bmc", "bivariate Markov model");
  c_bmc->add_option("tensor", in_a)->required();
  c_bmc->add_option("--lambda", lambda4, "l11 l12 l21 l22")
      ->expected(4)
      ->required();
  auto* mutate_opt = c_bmc->add_option("--mutate", mutate_path,
                                       "stochastic matrix acting on the tensor");
  c_bmc->add_option("--which", which, "q1|q2|q3 (with --mutate)");
  c_bmc->add_option("-o,--out", out_path);

  auto* c_iterate = app.add_subcommand("iterate", "run a block model");
  c_iterate->add_option("model", in_a)->required();
  c_iterate->add_option("--x0", x0_path, "initial stacked state document")
      ->required();
  c_iterate->add_option("--tol", tol_value, "L1 convergence threshold");
  c_iterate->add_option("--max-steps", max_steps);
  c_iterate->add_option("-o,--out", out_path);

  auto* c_qso_apply =
      app.add_subcommand("qso-apply", "evaluate a quadratic stochastic operator");
  c_qso_apply->add_option("tensor", in_a)->required();
  c_qso_apply->add_option("--x", x_list, "comma-separated simplex vector")
      ->required();
  c_qso_apply->add_option("-o,--out", out_path);

  auto* c_qso_permute =
      app.add_subcommand("qso-permute", "permute frontal slices");
  c_qso_permute->add_option("tensor", in_a)->required();
  c_qso_permute
      ->add_option("--sigma", sigma_list, "comma-separated 1-based images")
      ->required();
  c_qso_permute->add_option("-o,--out", out_path);

  auto* c_scenario = app.add_subcommand("scenario", "run a scenario config");
  c_scenario->add_option("config", in_a)->required();

  int exit_code = 0;
  try {
    app.parse(argc, argv);
    std::optional<double> eps;
    if (eps_opt->count() > 0) eps = eps_value;
    Tolerance tol = eps ? Tolerance(*eps) : Tolerance{};
    mutate_given = mutate_opt->count() > 0;

    if (c_validate->parsed()) {
      exit_code = run_validate(in_a, kind, eps);
    } else if (c_mul->parsed()) {
      auto lhs = io::load_cubic12(in_a, eps);
      auto rhs = io::load_cubic12(in_b, eps);
      emit(io::doc(mul(lhs, rhs, parse_rule(rule_tokens, tol))), out_path);
    } else if (c_act->parsed()) {
      if (side != 1 && side != 2) throw UsageError("--side must be 1 or 2");
      auto a = io::load_stochastic_matrix(in_a, eps);
      auto p = io::load_cubic12(in_b, eps);
      emit(io::doc(act(a, p,
                       side == 1 ? ActionSide::First : ActionSide::Second)),
           out_path);
    } else if (c_power->parsed()) {
      auto p = io::load_cubic12(in_a, eps);
      emit(io::doc(power(p, m_exp, parse_rule(rule_tokens, tol))), out_path);
    } else if (c_transpose->parsed()) {
      emit(io::doc(transpose12(io::load_cubic12(in_a, eps))), out_path);
    } else if (c_marginals->parsed()) {
      emit(marginals_doc(io::load_cubic12(in_a, eps)), out_path);
    } else if (c_slice->parsed()) {
      auto p = io::load_cubic12(in_a, eps);
      SliceAxis ax = axis == "frontal"      ? SliceAxis::Frontal
                     : axis == "horizontal" ? SliceAxis::Horizontal
                     : axis == "lateral"
                         ? SliceAxis::Lateral
                         : throw UsageError("--axis: unknown axis " + axis);
      emit(io::doc_raw(slice(p.grid(), ax, index - 1)), out_path);
    } else if (c_matricize->parsed()) {
      auto p = io::load_cubic12(in_a, eps);
      if (csv_path.empty()) {
        const Matrix m = matricize_frontal(p.grid());
        for (int i = 0; i < m.rows(); ++i) {
          for (int j = 0; j < m.cols(); ++j) {
            if (j > 0) std::cout << ',';
            std::cout << detail::dtoa(m.at(i, j));
          }
          std::cout << '\n';
        }
      } else {
        io::save_matricized_csv(csv_path, p.grid());
      }
    } else if (c_bmc->parsed()) {
      auto p = io::load_cubic12(in_a, eps);
      if (mutate_given) {
        auto a = io::load_stochastic_matrix(mutate_path, eps);
        emit(io::doc(induced_chain(a, p, lambda4, parse_which(which), tol)),
             out_path);
      } else {
        emit(io::doc(build_bivariate(p, lambda4, tol)), out_path);
      }
    } else if (c_iterate->parsed()) {
      auto model = io::load_model(in_a, eps);
      auto x0 = io::load_state(x0_path, eps);
      emit(iterate_doc(iterate(model, x0, max_steps, tol_value)), out_path);
    } else if (c_qso_apply->parsed()) {
      auto p = io::load_cubic3(in_a, eps);
      SimplexVector x(parse_decimal_list(x_list, "--x"), tol);
      emit(io::doc(apply_qso(p, x)), out_path);
    } else if (c_qso_permute->parsed()) {
      auto p = io::load_cubic3(in_a, eps);
      std::vector<double> raw = parse_decimal_list(sigma_list, "--sigma");
      std::vector<int> images;
      for (double v : raw) {
        int iv = static_cast<int>(v);
        if (static_cast<double>(iv) != v) {
          throw UsageError("--sigma: images must be integers");
        }
        images.push_back(iv - 1);
      }
      emit(io::doc(permute_frontal(Permutation(images), p)), out_path);
    } else if (c_scenario->parsed()) {
      run_scenario(in_a, eps);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
