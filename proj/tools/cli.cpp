#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "kgcode/analysis.hpp"
#include "kgcode/clopen.hpp"
#include "kgcode/coder.hpp"
#include "kgcode/error.hpp"
#include "kgcode/labeltree.hpp"
#include "kgcode/schedule.hpp"

namespace kgcode {

namespace {

constexpr int kNegative = 1;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::input, "cannot open " + path);
  return in;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::input, "cannot write " + path);
  f << text;
}

ClopenClass load_class(const std::string& path) {
  auto in = open_in(path);
  return read_class(in);
}

UTree load_tree(const std::string& path) {
  auto in = open_in(path);
  return read_tree(in);
}

BitString parse_hex(const std::string& hex) {
  BitString out;
  for (char ch : hex) {
    int v;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    else fail(ErrorKind::input, std::string("invalid hex digit '") + ch + "'");
    out.append(BitString::from_index(static_cast<unsigned>(v), 4));
  }
  return out;
}

BitString load_source(const std::string& path) {
  auto in = open_in(path);
  std::string text, line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char ch : line) {
      if (ch == '0' || ch == '1') text += ch;
      else if (ch != ' ' && ch != '\t' && ch != '\r')
        fail(ErrorKind::input,
             "invalid source character at line " + std::to_string(line_no));
    }
  }
  return BitString(text);
}

std::string describe(const PropertyFailure& f, bool density) {
  std::ostringstream s;
  s << "level " << f.level << " node " << node_text(f.node) << ": ";
  if (density)
    s << "density " << f.density.str() << " below threshold "
      << f.threshold.str();
  else
    s << f.extensions << " extendible extensions, need " << f.required;
  return s.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct Options {
  std::string class_path, tree_path, schedule = "kucera", out, source, hex,
      code, labelling, trace, property = "both", densities, fixtures;
  std::optional<std::size_t> levels, bits;
  std::uint64_t seed = 1;
  std::size_t count = 5000, max_height = 3, max_width = 10, n_max = 4096,
              t_max = 8, stages = 4, cuts = 40;
  unsigned depth = 16, gap = 1;
};

int cmd_encode(const Options& o, std::ostream& out) {
  if (o.source.empty() == o.hex.empty())
    fail(ErrorKind::input, "give exactly one of --source and --hex");
  const Schedule sched = Schedule::parse(o.schedule);
  const ClopenClass p = load_class(o.class_path);
  BitString x = o.source.empty() ? parse_hex(o.hex) : load_source(o.source);
  if (o.bits) {
    if (*o.bits > x.size())
      fail(ErrorKind::input, "--bits exceeds the supplied source");
    x = x.prefix(*o.bits);
  }
  const std::uint64_t original = x.size();
  const std::size_t levels = sched.levels_covering(original);
  while (x.size() < sched.M(levels)) x.push_back(false);

  const EndToEndResult r = end_to_end(x, p, sched);
  CodeFile file{original, sched.spec(), levels, r.path.code, r.path.slots};
  std::ostringstream text;
  write_code_file(text, file);
  emit(o.out, text.str(), out);
  if (!o.trace.empty())
    emit(o.trace, use_profile_csv(sched, r.check.use), out);
  if (!o.out.empty())
    out << "encoded " << original << " bits (padded to " << x.size()
        << ") into " << r.path.code.size() << " code bits over " << levels
        << " blocks\n";
  return 0;
}

int cmd_decode(const Options& o, std::ostream& out) {
  auto in = open_in(o.code);
  const CodeFile file = read_code_file(in);
  const Schedule sched =
      Schedule::parse(o.schedule.empty() ? file.schedule : o.schedule);
  const ClopenClass p = load_class(o.class_path);
  const PruneResult pr = prune(p, sched, file.levels);
  CodingSession session(pr.pstar, sched);
  const DecodeResult d = session.decode(file.code, file.levels);
  if (file.bits > d.source.size())
    fail(ErrorKind::input, "code file claims more bits than it encodes");
  emit(o.out, d.source.prefix(file.bits).str() + "\n", out);
  return 0;
}

int cmd_prune(const Options& o, std::ostream& out) {
  if (!o.levels) fail(ErrorKind::input, "prune needs --levels");
  const Schedule sched = Schedule::parse(o.schedule);
  const ClopenClass p = load_class(o.class_path);
  const PruneResult r = prune(p, sched, *o.levels);
  std::ostringstream cls;
  write_class(cls, r.pstar);
  if (!o.out.empty()) emit(o.out, cls.str(), out);
  if (!o.trace.empty()) {
    std::string csv = "step,level,node,density_before,removed\n";
    for (const auto& a : r.trace)
      csv += std::to_string(a.step) + ',' + std::to_string(a.level) + ',' +
             node_text(a.node) + ',' + a.density_before.str() + ',' +
             a.removed.str() + '\n';
    emit(o.trace, csv, out);
  }
  out << "budget " << r.budget.str() << ", measure " << measure(p).str()
      << ", removed " << measure(r.removed).str() << " in " << r.trace.size()
      << " actions, remaining " << measure(r.pstar).str() << "\n";
  out << "strings with density <= 2^(m-l) are removed, so survivors exceed "
         "the threshold strictly; the density property only asks for >=\n";
  if (o.out.empty()) out << cls.str();
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.class_path.empty() && o.tree_path.empty())
    fail(ErrorKind::input, "verify needs --class or --tree");
  bool ok = true;
  if (!o.class_path.empty()) {
    if (!o.levels) fail(ErrorKind::input, "verify needs --levels with --class");
    const Schedule sched = Schedule::parse(o.schedule);
    const ClopenClass p = load_class(o.class_path);
    if (o.property != "both" && o.property != "extension" &&
        o.property != "density")
      fail(ErrorKind::input, "--property must be extension, density or both");
    if (o.property != "density") {
      const auto v = verify_extension_property(p, sched, *o.levels);
      out << "extension property: "
          << (v.holds ? "holds" : "fails at " + describe(*v.failure, false))
          << "\n";
      ok = ok && v.holds;
    }
    if (o.property != "extension") {
      const auto v = verify_density_property(p, sched, *o.levels);
      out << "density property: "
          << (v.holds ? "holds" : "fails at " + describe(*v.failure, true))
          << "\n";
      ok = ok && v.holds;
    }
    if (!o.densities.empty())
      emit(o.densities,
           density_csv(density_threshold_experiment(p, sched, *o.levels)),
           out);
  }
  if (!o.tree_path.empty()) {
    const auto c = measure_condition_check(load_tree(o.tree_path));
    out << "measure condition: sum " << c.sum.str() << ", measure "
        << c.measure.str() << ", " << (c.satisfied ? "satisfied" : "not satisfied")
        << "\n";
    ok = ok && c.satisfied;
  }
  return ok ? 0 : kNegative;
}

int cmd_label(const Options& o, std::ostream& out) {
  const UTree t = load_tree(o.tree_path);
  if (!o.labelling.empty()) {
    auto in = open_in(o.labelling);
    const LabelVerdict v = validate_labelling(t, read_labelling(in));
    if (v.valid)
      out << "labelling valid\n";
    else
      out << "condition (" << v.condition << ") violated: " << v.detail << "\n";
    for (const auto& s : v.duplicate_subjects)
      out << "advisory: duplicate subject x_" << node_text(s) << "\n";
    out << "full: " << yes_no(v.valid && v.full) << "\n";
    return v.valid ? 0 : kNegative;
  }
  const LabelSearch r = is_fully_labelable_bruteforce(t);
  out << "fully labelable: " << yes_no(r.labelable) << "\n";
  if (r.witness) {
    std::ostringstream text;
    write_labelling(text, *r.witness);
    emit(o.out, text.str(), out);
  }
  return r.labelable ? 0 : kNegative;
}

int cmd_splice_check(const Options& o, std::ostream& out) {
  const UTree t = load_tree(o.tree_path);
  const Reduction r = splice_reduce(t);
  out << "splice-reducible: " << yes_no(r.reducible);
  if (r.reducible) out << " (" << r.steps.size() << " splices)";
  out << "\n";
  if (!r.reducible) return kNegative;
  std::string steps;
  for (const auto& s : r.steps)
    steps += "level " + std::to_string(s.level) + ": " + node_text(s.first) +
             " + " + node_text(s.second) + " -> " + node_text(s.survivor) + "\n";
  emit(o.out, steps, out);
  const Labelling l = labelling_from_reduction(t, r.steps);
  const LabelVerdict v = validate_labelling(t, l);
  out << "derived labelling: " << (v.valid ? "valid" : "invalid")
      << ", full: " << yes_no(v.full) << "\n";
  if (!v.valid || !v.full)
    fail(ErrorKind::internal, "labelling derived from the reduction is not full");
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  std::vector<UTree> trees;
  std::vector<std::string> names;
  if (!o.fixtures.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(o.fixtures))
      if (e.path().extension() == ".tree") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      trees.push_back(load_tree(f.string()));
      names.push_back(f.filename().string());
    }
  } else {
    trees = sweep_instances(o.seed, o.count, o.max_height, o.max_width);
  }
  const SweepReport r = sweep(trees);
  emit(o.out, sweep_csv(r), out);
  if (!o.out.empty() || !names.empty()) {
    for (std::size_t i = 0; i < names.size(); ++i)
      out << names[i] << ": labelable " << yes_no(r.rows[i].labelable)
          << ", reducible " << yes_no(r.rows[i].reducible) << "\n";
    std::size_t labelable = 0, condition = 0;
    for (const auto& row : r.rows) {
      labelable += row.labelable;
      condition += row.condition;
    }
    out << r.rows.size() << " instances, " << labelable << " labelable, "
        << condition << " meet the measure condition, "
        << r.condition_failures.size()
        << " meet it without being labelable, " << r.disagreements.size()
        << " disagreements\n";
  }
  for (std::size_t i : r.disagreements)
    out << "disagreement: " << r.rows[i].hash << "\n";
  return r.disagreements.empty() ? 0 : kNegative;
}

int cmd_report(const Options& o, std::ostream& out) {
  const Schedule sched = Schedule::parse(o.schedule);
  const RedundancyReport r = redundancy_report(sched, o.n_max);
  emit(o.out, to_csv(r), out);
  if (!o.out.empty() && !r.rows.empty())
    out << sched.spec() << ": use(" << r.rows.back().n << ") = "
        << r.rows.back().use << ", redundancy " << r.rows.back().redundancy
        << "\n";
  return 0;
}

int cmd_vt_run(const Options& o, std::ostream& out) {
  std::optional<ApproxSequence> p;
  if (!o.class_path.empty()) {
    p.emplace(std::vector<ClopenClass>{load_class(o.class_path)});
  } else {
    std::mt19937_64 rng(o.seed);
    p.emplace(random_approximation(rng, o.depth, o.stages, o.cuts, 2, true));
  }
  std::vector<unsigned> g(o.t_max, o.gap), n;
  for (std::size_t t = 0; t <= o.t_max; ++t)
    n.push_back(static_cast<unsigned>(t * (o.gap + 1)));
  const VtRun run = vt_construction(*p, g, n, o.t_max);
  emit(o.out, vt_csv(run), out);
  bool ok = true;
  for (const auto& lv : run.levels)
    ok = ok && lv.step_ok && lv.product_ok && lv.nested;
  if (run.witness) {
    out << "witness t=" << run.witness->t << " prefix "
        << node_text(run.witness->prefix) << " density "
        << run.witness->density.str() << " bound " << run.witness->bound.str()
        << (run.witness->within ? "" : " EXCEEDED") << "\n";
    ok = ok && run.witness->within;
  } else {
    out << "leftmost path stays inside V_" << o.t_max << "\n";
  }
  return ok ? 0 : kNegative;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Block coding into effectively closed classes"};
  app.require_subcommand(1);
  Options o;

  auto* encode = app.add_subcommand("encode", "encode a source into a class");
  encode->add_option("--class", o.class_path)->required();
  encode->add_option("--schedule", o.schedule);
  encode->add_option("--source", o.source, "file of 0/1 characters");
  encode->add_option("--hex", o.hex, "source as hex digits");
  encode->add_option("--bits", o.bits, "keep only the first bits");
  encode->add_option("--out", o.out);
  encode->add_option("--trace", o.trace, "use profile CSV");

  auto* decode = app.add_subcommand("decode", "decode a code file");
  decode->add_option("--class", o.class_path)->required();
  decode->add_option("--code", o.code)->required();
  decode->add_option("--schedule", o.schedule);
  decode->add_option("--out", o.out);

  auto* prune_cmd = app.add_subcommand("prune", "remove low-density strings");
  prune_cmd->add_option("--class", o.class_path)->required();
  prune_cmd->add_option("--schedule", o.schedule);
  prune_cmd->add_option("--levels", o.levels);
  prune_cmd->add_option("--out", o.out);
  prune_cmd->add_option("--trace", o.trace);

  auto* verify = app.add_subcommand("verify", "check class properties");
  verify->add_option("--class", o.class_path);
  verify->add_option("--tree", o.tree_path);
  verify->add_option("--schedule", o.schedule);
  verify->add_option("--levels", o.levels);
  verify->add_option("--property", o.property);
  verify->add_option("--densities", o.densities, "density report CSV");

  auto* label = app.add_subcommand("label", "decide or check full labellings");
  label->add_option("--tree", o.tree_path)->required();
  label->add_option("--labelling", o.labelling);
  label->add_option("--out", o.out);

  auto* splice_cmd = app.add_subcommand("splice-check", "splice-reduce a tree");
  splice_cmd->add_option("--tree", o.tree_path)->required();
  splice_cmd->add_option("--out", o.out);

  auto* sweep_cmd = app.add_subcommand("sweep", "compare both deciders");
  sweep_cmd->add_option("--seed", o.seed);
  sweep_cmd->add_option("--count", o.count);
  sweep_cmd->add_option("--max-height", o.max_height);
  sweep_cmd->add_option("--max-width", o.max_width);
  sweep_cmd->add_option("--fixtures", o.fixtures, "directory of .tree files");
  sweep_cmd->add_option("--out", o.out);

  auto* report = app.add_subcommand("report", "redundancy table");
  report->add_option("--schedule", o.schedule);
  report->add_option("--n", o.n_max);
  report->add_option("--out", o.out);

  auto* vt = app.add_subcommand("vt-run", "nested truncated classes");
  vt->add_option("--class", o.class_path);
  vt->add_option("--seed", o.seed);
  vt->add_option("--depth", o.depth);
  vt->add_option("--stages", o.stages);
  vt->add_option("--cuts", o.cuts, "removals per stage");
  vt->add_option("--g", o.gap, "constant overhead g");
  vt->add_option("--t-max", o.t_max);
  vt->add_option("--out", o.out);

  std::vector<const char*> argv{"kgcode"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (encode->parsed()) return cmd_encode(o, out);
    if (decode->parsed()) {
      if (decode->count("--schedule") == 0) o.schedule.clear();
      return cmd_decode(o, out);
    }
    if (prune_cmd->parsed()) return cmd_prune(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (label->parsed()) return cmd_label(o, out);
    if (splice_cmd->parsed()) return cmd_splice_check(o, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out);
    if (report->parsed()) return cmd_report(o, out);
    if (vt->parsed()) return cmd_vt_run(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::input: return 2;
      case ErrorKind::precondition: return 3;
      case ErrorKind::internal: return 4;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace kgcode
