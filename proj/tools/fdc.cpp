// fdc: check, elaborate, evaluate, specialize, analyze and fuzz core (.fd)
// and surface (.hsk) programs.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fd/analysis.hpp"
#include "fd/core_text.hpp"
#include "fd/elaborate.hpp"
#include "fd/prelude.hpp"
#include "fd/propcheck.hpp"
#include "fd/reduction.hpp"
#include "fd/surface.hpp"
#include "fd/typing.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::json;
using fd::Diagnostic;

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;

struct Options {
  bool json = false;
  std::string overlap = "reject";
  std::string absurd = "diverge";
  int synth_depth = 64;
  int resolve_depth = 32;
  std::size_t fuel = fd::kDefaultFuel;
  bool all = false;
  std::string expr;
  std::vector<std::string> files;
  std::string prop = "all";
  std::string prelude = "all";
  std::uint64_t seed = 42;
  std::size_t count = 1000;
  int size = 30;
};

struct IoError {
  std::string message;
};

/// Output of one command on one file, printed in input order.
struct Report {
  std::string text;
  std::vector<std::string> records;
  int code = kOk;

  void line(const std::string& s) { text += s + "\n"; }
  void diag(Diagnostic d, const std::string& file) {
    if (d.file.empty()) d.file = file;
    text += d.to_string() + "\n";
    records.push_back(d.to_json());
    code = std::max(code, kDiagnostics);
  }
};

Diagnostic error(std::string code, std::string message) {
  Diagnostic d;
  d.code = std::move(code);
  d.message = std::move(message);
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_surface(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".hsk") == 0;
}

fd::ElabOptions elab_options(const Options& o) {
  fd::ElabOptions e;
  e.overlap_first = o.overlap == "first";
  e.absurd_omit = o.absurd == "omit";
  e.synth_depth = o.synth_depth;
  e.resolve_depth = o.resolve_depth;
  return e;
}

fd::Result<fd::Env> base_env() {
  if (const char* p = std::getenv("FDC_PRELUDE")) {
    std::string text = read_file(p);
    auto env = fd::load_prelude(fd::PreludeKind::Maybe, text);
    if (!env) {
      Diagnostic d = env.error();
      d.file = p;
      return d;
    }
    return env;
  }
  return fd::load_prelude(fd::PreludeKind::Maybe);
}

/// A file loaded on top of the prelude. `program` holds the file's own
/// declarations (elaborated ones for .hsk input).
struct Loaded {
  fd::Env env;
  fd::Program program;
  bool ok = false;
};

Loaded load(const std::string& path, const fd::Env& base, const Options& o,
            Report& rep) {
  Loaded out;
  std::string text = read_file(path);
  if (is_surface(path)) {
    auto sp = fd::parse_surface(text);
    if (!sp) {
      rep.diag(sp.error(), path);
      return out;
    }
    auto problems = fd::validate_surface(*sp);
    for (const auto& d : problems) rep.diag(d, path);
    if (!problems.empty()) return out;
    fd::ElabReport er = fd::elaborate_program(*sp, base, elab_options(o));
    for (const auto& d : er.diagnostics) rep.diag(d, path);
    if (!er.ok()) return out;
    out.env = er.env;
    out.program = er.program;
    out.ok = true;
    return out;
  }
  auto prog = fd::parse_core(text);
  if (!prog) {
    rep.diag(prog.error(), path);
    return out;
  }
  fd::CheckReport cr = fd::check_program(*prog, base);
  for (const auto& d : cr.diagnostics) rep.diag(d, path);
  out.env = cr.env;
  out.program = *prog;
  out.ok = cr.ok();
  return out;
}

/// Runs `f` on every file concurrently; reports come back in input order.
template <typename F>
std::vector<Report> per_file(const std::vector<std::string>& files, F f) {
  std::vector<std::future<Report>> jobs;
  for (const auto& file : files)
    jobs.push_back(std::async(std::launch::async, [&f, file] {
      Report r;
      try {
        f(file, r);
      } catch (const IoError& e) {
        r.text += "fdc: " + e.message + "\n";
        r.records.push_back(json{{"file", file}, {"error", e.message}}.dump());
        r.code = kUsage;
      }
      return r;
    }));
  std::vector<Report> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

int emit(const std::vector<Report>& reports, const Options& o) {
  int code = kOk;
  for (const auto& r : reports) {
    if (o.json) {
      for (const auto& rec : r.records) std::cout << rec << "\n";
    } else {
      std::cout << r.text;
    }
    code = std::max(code, r.code);
  }
  return code;
}

int cmd_check(const Options& o, const fd::Env& base) {
  return emit(per_file(o.files,
                       [&](const std::string& file, Report& rep) {
                         Loaded l = load(file, base, o, rep);
                         if (!l.ok) return;
                         rep.line(file + ": ok (" +
                                  std::to_string(l.program.size()) +
                                  " declarations)");
                         rep.records.push_back(json{{"file", file},
                                                    {"status", "ok"},
                                                    {"declarations",
                                                     l.program.size()}}
                                                   .dump());
                       }),
              o);
}

int cmd_elab(const Options& o, const fd::Env& base) {
  return emit(per_file(o.files,
                       [&](const std::string& file, Report& rep) {
                         Loaded l = load(file, base, o, rep);
                         if (!l.ok) return;
                         std::string core = fd::print_core(l.program);
                         rep.text += core;
                         rep.records.push_back(
                             json{{"file", file}, {"core", core}}.dump());
                       }),
              o);
}

/// Parses and types the -e expression against a loaded file.
fd::Result<fd::NodePtr> expression(const Loaded& l, const std::string& text,
                                   fd::NodePtr* type) {
  auto m = fd::parse_term(text);
  if (!m) return m;
  auto t = fd::infer_term(l.env, *m);
  if (!t) return t.error();
  if (type && t->is_exact()) *type = t->type;
  return m;
}

int single(const Options& o, const fd::Env& base,
           const std::function<void(const Loaded&, Report&)>& body) {
  if (o.files.size() != 1) {
    std::cerr << "fdc: expected exactly one file\n";
    return kUsage;
  }
  return emit(per_file(o.files,
                       [&](const std::string& file, Report& rep) {
                         Loaded l = load(file, base, o, rep);
                         if (l.ok) body(l, rep);
                       }),
              o);
}

int cmd_eval(const Options& o, const fd::Env& base) {
  return single(o, base, [&](const Loaded& l, Report& rep) {
    fd::NodePtr type;
    auto m = expression(l, o.expr, &type);
    if (!m) {
      rep.diag(m.error(), "<expr>");
      return;
    }
    if (o.all) {
      fd::Exploration ex = fd::explore(l.env, *m, o.fuel);
      json vals = json::array();
      for (const auto& v : ex.values) {
        rep.line(fd::print_core(v));
        vals.push_back(fd::print_core(v));
      }
      if (ex.reached_zero) rep.line("0");
      for (const auto& s : ex.stuck) {
        rep.diag(error("Stuck", "irreducible non-value " + fd::print_core(s)),
                 "<expr>");
      }
      if (ex.exhausted) rep.line("-- fuel exhausted");
      rep.records.push_back(json{{"values", vals},
                                 {"zero", ex.reached_zero},
                                 {"exhausted", ex.exhausted}}
                                .dump());
      return;
    }
    fd::WhnfResult r = fd::whnf(l.env, *m, o.fuel);
    switch (r.kind) {
      case fd::WhnfResult::Value:
      case fd::WhnfResult::ZeroResult: {
        std::string shown = fd::print_core(r.node);
        rep.line(shown);
        json rec{{"result", shown},
                 {"kind", r.kind == fd::WhnfResult::Value ? "value" : "zero"},
                 {"steps", r.steps}};
        if (type) rec["type"] = fd::print_core(type);
        rep.records.push_back(rec.dump());
        return;
      }
      case fd::WhnfResult::OutOfFuel:
        rep.diag(error("OutOfFuel",
                       "no value after " + std::to_string(r.steps) + " steps"),
                 "<expr>");
        return;
      case fd::WhnfResult::Stuck:
        rep.diag(error("Stuck", "irreducible non-value " + fd::print_core(r.node)),
                 "<expr>");
        return;
    }
  });
}

int cmd_specialize(const Options& o, const fd::Env& base) {
  return single(o, base, [&](const Loaded& l, Report& rep) {
    auto m = expression(l, o.expr, nullptr);
    if (!m) {
      rep.diag(m.error(), "<expr>");
      return;
    }
    auto s = fd::specialize(l.env, *m, o.fuel);
    if (!s) {
      rep.diag(s.error(), "<expr>");
      return;
    }
    std::string shown = fd::print_core(*s);
    rep.line(shown);
    rep.records.push_back(
        json{{"specialized", shown},
             {"no_zero", fd::check_no_zero_syntactic(l.env, *s)}}
            .dump());
  });
}

json function_record(const std::string& file, const fd::FunctionReport& f) {
  json missing = json::array();
  for (const auto& t : f.missing) missing.push_back(t);
  return {{"file", file},           {"method", f.method},
          {"ok", f.ok()},           {"condition1", f.condition1},
          {"condition2", f.condition2}, {"missing", missing},
          {"tuples", f.tuples}};
}

int cmd_analyze(const Options& o, const fd::Env& base) {
  return emit(per_file(o.files,
                       [&](const std::string& file, Report& rep) {
                         Loaded l = load(file, base, o, rep);
                         if (!l.ok) return;
                         fd::HssdiReport h = fd::check_hssdi(l.env);
                         std::istringstream lines(h.to_string());
                         for (std::string ln; std::getline(lines, ln);)
                           rep.line(file + ": " + ln);
                         for (const auto& f : h.functions)
                           rep.records.push_back(function_record(file, f).dump());
                         if (!h.ok()) rep.code = std::max(rep.code, kDiagnostics);
                       }),
              o);
}

int cmd_fuzz(const Options& o) {
  std::vector<std::string> props;
  if (o.prop == "all") {
    props = fd::property_names();
  } else if (std::find(fd::property_names().begin(), fd::property_names().end(),
                       o.prop) != fd::property_names().end()) {
    props = {o.prop};
  } else {
    std::cerr << "fdc: unknown property " << o.prop << "\n";
    return kUsage;
  }
  std::vector<fd::PreludeKind> preludes;
  if (o.prelude == "all") {
    preludes = fd::all_preludes();
  } else if (auto k = fd::parse_prelude_name(o.prelude)) {
    preludes = {*k};
  } else {
    std::cerr << "fdc: unknown prelude " << o.prelude << "\n";
    return kUsage;
  }
  std::vector<fd::Env> envs;
  for (auto k : preludes) {
    auto env = fd::load_prelude(k);
    if (!env) {
      std::cerr << env.error().to_string() << "\n";
      return kDiagnostics;
    }
    envs.push_back(*env);
  }
  std::vector<std::future<fd::PropResult>> jobs;
  for (std::size_t i = 0; i < preludes.size(); ++i)
    for (const auto& p : props)
      jobs.push_back(std::async(std::launch::async, [&, i, p] {
        fd::GenConfig cfg;
        cfg.seed = o.seed;
        cfg.size = o.size;
        cfg.prelude = preludes[i];
        return fd::run_property(p, envs[i], cfg, o.count);
      }));
  int code = kOk;
  for (auto& j : jobs) {
    fd::PropResult r = j.get();
    if (!r.passed) code = kDiagnostics;
    if (o.json) {
      json rec{{"property", r.name}, {"prelude", r.prelude}, {"passed", r.passed},
               {"cases", r.cases},   {"skipped", r.skipped}};
      if (!r.passed) {
        rec["case_seed"] = r.case_seed;
        rec["counterexample"] = r.counterexample;
        rec["detail"] = r.detail;
      }
      std::cout << rec.dump() << "\n";
      continue;
    }
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << r.prelude
              << "] " << r.cases << " cases";
    if (r.skipped) std::cout << ", " << r.skipped << " skipped";
    std::cout << "\n";
    if (!r.passed) {
      std::cout << "  seed " << r.case_seed << ": " << r.detail << "\n";
      if (!r.counterexample.empty())
        std::cout << "  counterexample: " << r.counterexample << "\n";
    }
  }
  return code;
}

void common(CLI::App* sub, Options& o) {
  sub->add_flag("--json", o.json, "Line-delimited JSON records");
  sub->add_option("--overlap", o.overlap, "Overlapping instances")
      ->check(CLI::IsMember({"reject", "first"}));
  sub->add_option("--absurd", o.absurd, "Instances for inconsistent pairs")
      ->check(CLI::IsMember({"diverge", "omit"}));
  sub->add_option("--synth-depth", o.synth_depth, "Coercion search depth");
  sub->add_option("--resolve-depth", o.resolve_depth, "Instance search depth");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"System FD checker, elaborator and evaluator"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Parse, elaborate and check files");
  auto* elab = app.add_subcommand("elab", "Print the core translation");
  auto* eval = app.add_subcommand("eval", "Evaluate an expression");
  auto* spec = app.add_subcommand("specialize", "Specialize an expression");
  auto* analyze = app.add_subcommand("analyze", "Check the HSSDI conditions");
  auto* fuzz = app.add_subcommand("fuzz", "Run the metatheory properties");

  for (auto* s : {check, elab, analyze}) {
    common(s, o);
    s->add_option("files", o.files, "Input files")->required();
  }
  for (auto* s : {eval, spec}) {
    common(s, o);
    s->add_option("file", o.files, "Input file")->required();
    s->add_option("-e,--expr", o.expr, "Expression")->required();
    s->add_option("--fuel", o.fuel, "Step limit");
  }
  auto* det = eval->add_flag("--det", "Deterministic whnf (default)");
  eval->add_flag("--all", o.all, "Enumerate every reduction path")->excludes(det);

  fuzz->add_flag("--json", o.json, "Line-delimited JSON records");
  fuzz->add_option("--prop", o.prop, "Property name or all");
  fuzz->add_option("--prelude", o.prelude, "bool, maybe, eq-ord, fundep or all");
  fuzz->add_option("--seed", o.seed, "Base seed");
  fuzz->add_option("--count", o.count, "Cases per property and prelude");
  fuzz->add_option("--size", o.size, "Generator size budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fuzz->parsed()) return cmd_fuzz(o);
    auto base = base_env();
    if (!base) {
      std::cerr << base.error().to_string() << "\n";
      return kDiagnostics;
    }
    if (check->parsed()) return cmd_check(o, *base);
    if (elab->parsed()) return cmd_elab(o, *base);
    if (eval->parsed()) return cmd_eval(o, *base);
    if (spec->parsed()) return cmd_specialize(o, *base);
    if (analyze->parsed()) return cmd_analyze(o, *base);
  } catch (const IoError& e) {
    std::cerr << "fdc: " << e.message << "\n";
    return kUsage;
  }
  return kUsage;
}
