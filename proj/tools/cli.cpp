#include "cli.hpp"

#include "consys/automaton.hpp"
#include "consys/builder.hpp"
#include "consys/io.hpp"
#include "consys/mahler.hpp"
#include "consys/rational.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace consys::cli {

namespace {

int exit_for(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Inconsistent:
  case ErrorKind::Resonance:
    return kNegative;
  case ErrorKind::ResourceCap:
  case ErrorKind::InsufficientOrder:
    return kResourceCap;
  case ErrorKind::Internal:
    return kInternal;
  default:
    return kInputError;
  }
}

struct Input {
  json doc;
  Context ctx;
};

Input read_input(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorKind::InvalidInput, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error &e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  if (!doc.is_object())
    fail(ErrorKind::InvalidInput, path + ": document must be an object");
  return {doc, read_context(doc)};
}

const json &member(const Input &in, const char *name) {
  if (!in.doc.contains(name))
    fail(ErrorKind::InvalidInput, std::string("document has no \"") + name + "\"");
  return in.doc[name];
}

void merge(Context &into, const Context &from) {
  for (const auto &c : from.constants)
    into.declare(c);
}

Scalar case_parameter(const std::string &text, Context &ctx) {
  bool name = !text.empty() && std::isalpha(static_cast<unsigned char>(text[0]));
  if (name) {
    ctx.declare(text);
    return Scalar::generator(text);
  }
  return parse_constant(text, ctx);
}

long integer_parameter(const std::string &text) {
  Scalar s = parse_constant(text, Context{});
  if (!s.is_integer())
    fail(ErrorKind::InvalidInput, "expected an integer, got " + text);
  return s.rational().get_num().get_si();
}

struct Options {
  std::string output;
  std::vector<std::string> inputs;
  std::string gauge_file;
  long steps = 1;
  long order = 16, solve_order = 64, max_order = kMaxOrder, max_degree = -1, terms = 128;
  std::string case_kind = "2M", p = "2", q = "3";
  std::size_t n = 2;
  std::uint64_t seed = 0;
  bool identity = false, lower_only = false;
};

struct Result {
  json body;
  int code = kOk;
};

Result cmd_check(const Options &o, Context &ctx) {
  Input in = read_input(o.inputs[0]);
  merge(ctx, in.ctx);
  AnySystem sys = system_from_json(member(in, "system"), in.ctx);
  Consistency c = std::visit([](const auto &s) { return check_consistency(s); }, sys);
  json body{{"command", "check"}, {"result", c.consistent ? "consistent" : "inconsistent"}};
  if (!c.consistent)
    body["residual"] = to_json(c.residual);
  return {body, c.consistent ? kOk : kNegative};
}

Result cmd_build(const Options &o, Context &ctx) {
  if (o.inputs.size() != 2)
    fail(ErrorKind::InvalidInput, "build takes two operator files");
  Input a = read_input(o.inputs[0]), b = read_input(o.inputs[1]);
  merge(ctx, a.ctx);
  merge(ctx, b.ctx);
  ScalarOperator first = operator_from_json(member(a, "operator"), a.ctx);
  ScalarOperator second = operator_from_json(member(b, "operator"), b.ctx);
  if (first.kind > second.kind)
    std::swap(first, second);
  json system;
  ModuleBasis basis;
  if (first.cs.has_delta()) {
    auto [sys, bs] = build_dd_system(first, second);
    system = to_json(sys);
    basis = bs;
  } else {
    auto [sys, bs] = build_ss_system(first, second);
    system = to_json(sys);
    basis = bs;
  }
  json labels = json::array();
  for (std::size_t k = 0; k < basis.labels.size(); ++k)
    labels.push_back(basis.label(k));
  return {{{"command", "build"}, {"system", system}, {"basis", labels}}};
}

Result cmd_gauge(const Options &o, Context &ctx) {
  Input in = read_input(o.inputs[0]), g = read_input(o.gauge_file);
  merge(ctx, in.ctx);
  merge(ctx, g.ctx);
  AnySystem sys = system_from_json(member(in, "system"), in.ctx);
  RatMatrix G = matrix_from_json(member(g, "G"), g.ctx);
  json body{{"command", "gauge"}};
  std::visit(
      [&](const auto &s) {
        auto [target, cert] = gauge(s, G);
        body["system"] = to_json(target);
        body["certificate"] = to_json(cert);
      },
      sys);
  return {body};
}

Result cmd_shift(const Options &o, Context &ctx) {
  Input in = read_input(o.inputs[0]);
  merge(ctx, in.ctx);
  AnySystem sys = system_from_json(member(in, "system"), in.ctx);
  json body{{"command", "shift"}, {"steps", o.steps}};
  std::visit(
      [&](const auto &s) {
        auto [target, cert] = sigma_shift(s, o.steps);
        body["system"] = to_json(target);
        body["certificate"] = to_json(cert);
      },
      sys);
  return {body};
}

Result cmd_reduce(const Options &o, Context &ctx) {
  Input in = read_input(o.inputs[0]);
  merge(ctx, in.ctx);
  AnySystem sys = system_from_json(member(in, "system"), in.ctx);
  if (!std::holds_alternative<SigmaSigmaSystem>(sys))
    fail(ErrorKind::Unsupported, "reduce needs a two-sigma system of case 2M");
  ConstantReduction r = reduce_2m_constants(std::get<SigmaSigmaSystem>(sys), o.order, o.max_order);
  return {{{"command", "reduce"},
           {"B1", to_json(r.B1)},
           {"B2", to_json(r.B2)},
           {"certificate", to_json(r.cert)},
           {"order_used", r.order_used}}};
}

Result cmd_solve(const Options &o, Context &ctx) {
  Input in = read_input(o.inputs[0]);
  merge(ctx, in.ctx);
  const json &ops = member(in, "operators");
  if (!ops.is_array() || ops.empty())
    fail(ErrorKind::InvalidInput, "\"operators\" must be a nonempty array");
  std::vector<ScalarOperator> list;
  for (const auto &j : ops)
    list.push_back(operator_from_json(j, in.ctx));
  Series seed = series_from_json(member(in, "seed"), in.ctx);
  RationalSolution s = solve_rational(list, seed, {o.solve_order, o.max_degree, o.max_order});
  json body{{"command", "solve-rational"}, {"order_used", s.order_used}};
  if (s.certified()) {
    body["result"] = "certified";
    body["f"] = to_json(*s.f);
    return {body};
  }
  body["result"] = "not-certified";
  body["reason"] = s.reason;
  return {body, kNegative};
}

Result cmd_gen(const Options &o, Context &ctx) {
  OperatorCase c = OperatorCase::S();
  const std::string &k = o.case_kind;
  if (k == "S")
    c = OperatorCase::S();
  else if (k == "Q")
    c = OperatorCase::Q(case_parameter(o.q, ctx));
  else if (k == "M")
    c = OperatorCase::M(integer_parameter(o.p));
  else if (k == "2S") {
    ctx.declare("alpha");
    c = OperatorCase::TwoS(Scalar::generator("alpha"), true);
  } else if (k == "2Q")
    c = OperatorCase::TwoQ(case_parameter(o.p, ctx), case_parameter(o.q, ctx));
  else if (k == "2M")
    c = OperatorCase::TwoM(integer_parameter(o.p), integer_parameter(o.q));
  else
    fail(ErrorKind::InvalidInput, "unknown case " + k);
  GaugeSpec gs;
  gs.identity = o.identity;
  gs.lower_only = o.lower_only;
  Instance inst = gen_instance(c, o.n, ConstantSpec{}, gs, o.seed);
  json body{{"command", "gen"}, {"seed", o.seed}};
  if (inst.dd) {
    body["system"] = to_json(inst.dd->source);
    body["certificate"] = to_json(*inst.dd);
  } else {
    body["system"] = to_json(inst.ss->source);
    body["certificate"] = to_json(*inst.ss);
  }
  return {body};
}

Result cmd_automaton(const Options &o, Context &ctx) {
  Input in = read_input(o.inputs[0]);
  merge(ctx, in.ctx);
  DFAO a = dfao_from_json(member(in, "automaton"));
  MahlerRelation rel = automaton_to_mahler(a, o.terms);
  json body{{"command", "automaton"},
            {"automaton", to_json(rel.lsd)},
            {"P", to_json(rel.P)},
            {"invertible", rel.invertible},
            {"degenerate", rel.degenerate},
            {"elimination_order", rel.elimination_order},
            {"residual_terms", rel.residual_terms},
            {"warnings", rel.warnings}};
  if (rel.invertible)
    body["system"] = {{"case", to_json(OperatorCase::M(rel.lsd.base))}, {"B", to_json(rel.system)}};
  if (rel.annihilator)
    body["annihilator"] = to_json(*rel.annihilator);
  return {body};
}

void write_output(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    fail(ErrorKind::InvalidInput, "cannot write " + path);
  f << text;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Consistent pairs of linear differential and difference systems", "consys"};
  app.require_subcommand(1);
  Options o;
  std::function<Result(const Options &, Context &)> handler;

  auto command = [&](const char *name, const char *about, auto fn, std::size_t files) {
    CLI::App *sub = app.add_subcommand(name, about);
    sub->add_option("-o,--output", o.output, "output file (default: standard output)");
    if (files > 0)
      sub->add_option("input", o.inputs, "input documents")->required()->expected(static_cast<int>(files));
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };

  command("check", "check the consistency condition of a system", cmd_check, 1);
  command("build", "system from a pair of scalar operators", cmd_build, 2);
  command("gauge", "apply a gauge transformation", cmd_gauge, 1)
      ->add_option("--gauge", o.gauge_file, "document with the matrix G")
      ->required();
  command("shift", "conjugate by the sigma products G_N", cmd_shift, 1)
      ->add_option("--steps", o.steps, "N");
  auto *reduce = command("reduce", "reduce a 2M pair to constant matrices", cmd_reduce, 1);
  reduce->add_option("--order", o.order, "initial series order");
  reduce->add_option("--max-order", o.max_order, "largest series order");
  auto *solve = command("solve-rational", "certified rational solution from operators and a seed", cmd_solve, 1);
  solve->add_option("--order", o.solve_order, "initial number of terms");
  solve->add_option("--max-deg", o.max_degree, "Padé degree bound (-1: half the terms)");
  solve->add_option("--max-order", o.max_order, "largest number of terms");
  auto *gen = command("gen", "seeded consistent instance with a planted certificate", cmd_gen, 0);
  gen->add_option("--case", o.case_kind, "S, Q, M, 2S, 2Q or 2M")->check(CLI::IsMember({"S", "Q", "M", "2S", "2Q", "2M"}));
  gen->add_option("--n", o.n, "dimension")->check(CLI::Range(1, 8));
  gen->add_option("--seed", o.seed, "random seed");
  gen->add_option("--p", o.p, "Mahler base (M), first parameter (2Q, 2M)");
  gen->add_option("--q", o.q, "q (Q), second parameter (2Q, 2M)");
  gen->add_flag("--identity", o.identity, "identity gauge");
  gen->add_flag("--lower-only", o.lower_only, "lower unipotent gauge factors only");
  command("automaton", "Mahler relation of an automatic set", cmd_automaton, 1)
      ->add_option("--terms", o.terms, "brute-force residual terms");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    Context ctx;
    Result r = handler(o, ctx);
    write_output(o.output, document(ctx, r.body).dump(2) + "\n", out);
    return r.code;
  } catch (const Error &e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

} // namespace consys::cli
