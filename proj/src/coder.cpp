#include "kgcode/coder.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "kgcode/error.hpp"

namespace kgcode {

bool WordTable::complete() const {
  return std::all_of(slots.begin(), slots.end(),
                     [](const auto& s) { return s.has_value(); });
}

std::optional<std::size_t> WordTable::slot_of(const BitString& word) const {
  for (std::size_t j = 0; j < slots.size(); ++j)
    if (slots[j] && *slots[j] == word) return j;
  return std::nullopt;
}

WordTable run_word_process(const ApproxSequence& approx, const Schedule& sched,
                           const BitString& node, std::size_t level) {
  const unsigned m = sched.m(level);
  const std::uint64_t start = sched.L(level);
  const std::uint64_t end = start + sched.l(level);
  if (node.size() != start)
    fail(ErrorKind::precondition,
         "node length " + std::to_string(node.size()) + " is not L(" +
             std::to_string(level) + ") = " + std::to_string(start));
  if (end > approx.depth())
    fail(ErrorKind::precondition, "class depth below L(" +
                                      std::to_string(level + 1) + ")");
  if (m > 24)
    fail(ErrorKind::precondition,
         "block length " + std::to_string(m) + " too large for a word table");

  WordTable table;
  table.node = node;
  table.level = level;
  table.slots.assign(std::size_t{1} << m, std::nullopt);

  std::set<BitString> held;
  std::vector<BitString> candidates;  // extendible extensions, lex order
  std::size_t cursor = 0;             // no unheld candidate before this
  std::size_t loaded_stage = static_cast<std::size_t>(-1);
  const std::size_t last = approx.size() - 1;

  for (std::size_t s = 0;; ++s) {
    const std::size_t stage_index = std::min(s + 1, last);
    const ClopenClass& p = approx[stage_index];
    const std::size_t stage = s + 1;

    std::optional<std::size_t> target;
    bool clear = false;
    for (std::size_t t = 0; t < table.slots.size(); ++t) {
      if (!table.slots[t]) {
        target = t;
        break;
      }
      if (!is_extendible(p, *table.slots[t])) {
        target = t;
        clear = true;
        break;
      }
    }
    if (!target) {
      if (stage_index == last) break;
      continue;
    }

    if (clear) {
      held.erase(*table.slots[*target]);
      table.history.push_back(
          {stage, *target, WordEvent::Kind::clear, *table.slots[*target]});
      table.slots[*target].reset();
      cursor = 0;
      continue;
    }

    if (loaded_stage != stage_index) {
      candidates = extendible_extensions(p, node, static_cast<unsigned>(end),
                                         table.slots.size());
      loaded_stage = stage_index;
      cursor = 0;
    }
    while (cursor < candidates.size() && held.count(candidates[cursor]))
      ++cursor;
    if (cursor == candidates.size()) {
      table.terminated = true;
      break;
    }
    const BitString& tau = candidates[cursor];
    held.insert(tau);
    table.slots[*target] = tau;
    table.history.push_back({stage, *target, WordEvent::Kind::assign, tau});
  }
  return table;
}

WordTable settle_words(const ClopenClass& p, const Schedule& sched,
                       const BitString& node, std::size_t level) {
  WordTable table = run_word_process(ApproxSequence({p}), sched, node, level);
  if (!table.complete())
    fail(ErrorKind::precondition,
         "extension property violated at " + node_text(node));
  return table;
}

bool OracleTape::at(std::size_t i) {
  if (i >= bits_.size())
    fail(ErrorKind::precondition, "oracle read past the supplied prefix");
  high_water_ = std::max(high_water_, i + 1);
  return bits_[i];
}

BitString OracleTape::read(std::size_t n) {
  BitString out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

const WordTable& CodingSession::table(const BitString& node,
                                      std::size_t level) {
  auto it = memo_.find(node);
  if (it == memo_.end())
    it = memo_.emplace(node, settle_words(p_, sched_, node, level)).first;
  return it->second;
}

CodePath CodingSession::encode(const BitString& x) {
  const auto levels = sched_.levels_for_source(x.size());
  if (!levels)
    fail(ErrorKind::precondition,
         "source length must equal M(n); got " + std::to_string(x.size()));
  if (sched_.L(*levels) > p_.depth())
    fail(ErrorKind::precondition,
         "class depth " + std::to_string(p_.depth()) + " is below L(" +
             std::to_string(*levels) + ") = " +
             std::to_string(sched_.L(*levels)));
  if (!is_extendible(p_, BitString{}))
    fail(ErrorKind::precondition, "cannot code into an empty class");

  CodePath path;
  path.source = x;
  path.levels = *levels;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < *levels; ++i) {
    const unsigned m = sched_.m(i);
    const std::size_t t = static_cast<std::size_t>(
        x.suffix_from(offset).prefix(m).to_index());
    offset += m;
    const WordTable& words = table(path.code, i);
    path.code = *words.slots[t];
    path.slots.push_back(t);
  }
  return path;
}

DecodeResult CodingSession::decode(const BitString& y, std::size_t levels) {
  if (y.size() < sched_.L(levels))
    fail(ErrorKind::precondition,
         "oracle prefix shorter than L(" + std::to_string(levels) + ")");
  OracleTape tape(y);
  DecodeResult out;
  BitString node;
  for (std::size_t i = 0; i < levels; ++i) {
    const unsigned m = sched_.m(i);
    const std::size_t end = node.size() + sched_.l(i);
    if (end > p_.depth())
      fail(ErrorKind::precondition, "class depth below L(" +
                                        std::to_string(i + 1) + ")");
    if (!is_extendible(p_, node))
      fail(ErrorKind::precondition,
           "oracle outside code tree at " + node_text(node));
    const WordTable& words = table(node, i);

    // Compare slot words bit by bit against the tape, in slot order.
    std::optional<std::size_t> hit;
    for (std::size_t j = 0; j < words.slots.size() && !hit; ++j) {
      const BitString& w = *words.slots[j];
      bool match = true;
      for (std::size_t b = node.size(); b < end && match; ++b)
        match = tape.at(b) == w[b];
      if (match) hit = j;
    }
    if (!hit)
      fail(ErrorKind::precondition,
           "oracle outside code tree at " + node_text(node));

    out.source.append(BitString::from_index(*hit, m));
    out.slots.push_back(*hit);
    for (unsigned k = 0; k < m; ++k) out.use.push_back(tape.high_water());
    node = *words.slots[*hit];
  }
  return out;
}

CodePath encode(const BitString& x, const ClopenClass& p,
                const Schedule& sched) {
  return CodingSession(p, sched).encode(x);
}

DecodeResult decode(const BitString& y, const ClopenClass& p,
                    const Schedule& sched, std::size_t levels) {
  return CodingSession(p, sched).decode(y, levels);
}

EndToEndResult end_to_end(const BitString& x, const ClopenClass& p,
                          const Schedule& sched) {
  const auto levels = sched.levels_for_source(x.size());
  if (!levels)
    fail(ErrorKind::precondition,
         "source length must equal M(n); got " + std::to_string(x.size()));
  EndToEndResult out;
  out.pruning = prune(p, sched, *levels);
  CodingSession session(out.pruning.pstar, sched);
  out.path = session.encode(x);
  out.check = session.decode(out.path.code, *levels);
  if (out.check.source != x)
    fail(ErrorKind::internal, "round trip did not recover the source");
  for (std::size_t k = 0; k < out.check.use.size(); ++k)
    if (out.check.use[k] != oracle_use_bound(sched, k))
      fail(ErrorKind::internal,
           "decoder use at bit " + std::to_string(k) + " differs from L(s+1)");
  return out;
}

void write_code_file(std::ostream& out, const CodeFile& file) {
  out << "bits=" << file.bits << '\n';
  out << "schedule=" << file.schedule << '\n';
  out << "levels=" << file.levels << '\n';
  out << "code=" << node_text(file.code) << '\n';
  out << "slots=";
  for (std::size_t i = 0; i < file.slots.size(); ++i)
    out << (i ? " " : "") << file.slots[i];
  out << '\n';
}

CodeFile read_code_file(std::istream& in) {
  CodeFile file;
  std::string line;
  std::size_t line_no = 0;
  bool seen_bits = false, seen_code = false, seen_levels = false;
  auto number = [&](const std::string& text) -> std::uint64_t {
    if (text.empty() || text.size() > 18 ||
        text.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorKind::input,
           "malformed number at line " + std::to_string(line_no));
    return std::stoull(text);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::input,
           "expected key=value at line " + std::to_string(line_no));
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "bits") {
      file.bits = number(value);
      seen_bits = true;
    } else if (key == "schedule") {
      file.schedule = value;
    } else if (key == "levels") {
      file.levels = number(value);
      seen_levels = true;
    } else if (key == "code") {
      try {
        file.code = parse_node_text(value);
      } catch (const Error&) {
        fail(ErrorKind::input,
             "invalid code string at line " + std::to_string(line_no));
      }
      seen_code = true;
    } else if (key == "slots") {
      std::istringstream items(value);
      std::string item;
      while (items >> item) file.slots.push_back(number(item));
    } else {
      fail(ErrorKind::input, "unknown key '" + key + "' at line " +
                                 std::to_string(line_no));
    }
  }
  if (!seen_bits || !seen_code || !seen_levels)
    fail(ErrorKind::input, "code file needs bits=, levels= and code= lines");
  return file;
}

std::string use_profile_csv(const Schedule& sched,
                            const std::vector<std::uint64_t>& use) {
  std::ostringstream out;
  out << "bit,block,use\n";
  for (std::size_t k = 0; k < use.size(); ++k)
    out << k << ',' << sched.block_of(k) << ',' << use[k] << '\n';
  return out.str();
}

}  // namespace kgcode
