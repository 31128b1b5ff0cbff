#include "dyadfrac/cover_io.hpp"

#include "dyadfrac/errors.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

namespace dyadfrac {

namespace {

std::uint64_t parse_u64(std::string_view tok, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw UsageError("expected a non-negative integer for " + std::string(what) + ", got '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    ++lineno;
    auto toks = split_ws(line);
    if (!toks.empty() && toks[0].front() != '#') f(toks, lineno);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_le(std::string_view bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v |= std::uint64_t{static_cast<unsigned char>(bytes[at + b])} << (8 * b);
  return v;
}

}  // namespace

std::string write_cover_text(const CellCover& c) {
  std::string out = "depth " + std::to_string(c.depth()) + " span " + std::to_string(c.span()) + " " +
                    std::string(to_string(c.exactness())) + "\n";
  for (auto k : c.indices()) {
    out += std::to_string(k);
    out += '\n';
  }
  return out;
}

CellCover read_cover_text(std::string_view text) {
  bool have_header = false;
  std::uint32_t depth = 0;
  std::uint64_t span = 1;
  Exactness ex = Exactness::kExact;
  std::vector<std::uint64_t> idx;
  for_each_line(text, [&](const std::vector<std::string_view>& t, std::size_t lineno) {
    if (!have_header) {
      if (t.size() < 4 || t[0] != "depth" || t[2] != "span" || t.size() > 5) {
        throw UsageError("cover header must read 'depth n span m [exact|outer]'");
      }
      const std::uint64_t d = parse_u64(t[1], "depth");
      if (d > kMaxExplicitDepth) throw UsageError("cover depth too large");
      depth = static_cast<std::uint32_t>(d);
      span = parse_u64(t[3], "span");
      if (t.size() == 5) {
        if (t[4] == "outer") ex = Exactness::kOuter;
        else if (t[4] != "exact") throw UsageError("cover exactness must be 'exact' or 'outer'");
      }
      have_header = true;
      return;
    }
    if (t.size() != 1) throw UsageError("line " + std::to_string(lineno) + ": expected one index");
    idx.push_back(parse_u64(t[0], "cell index"));
  });
  if (!have_header) throw UsageError("cover file has no header");
  return CellCover(depth, span, std::move(idx), ex);
}

std::string write_cover_binary(const CellCover& c) {
  if (c.span() > 0xffffffffu || c.size() > 0xffffffffu) throw UsageError("cover too large for the binary format");
  std::string out = c.exactness() == Exactness::kExact ? "DYCE" : "DYCO";
  put_u32(out, c.depth());
  put_u32(out, static_cast<std::uint32_t>(c.span()));
  put_u32(out, static_cast<std::uint32_t>(c.size()));
  out.reserve(16 + 8 * c.size());
  for (auto k : c.indices()) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((k >> (8 * b)) & 0xff));
  }
  return out;
}

CellCover read_cover_binary(std::string_view bytes) {
  if (bytes.size() < 16) throw UsageError("binary cover shorter than its header");
  Exactness ex;
  if (bytes.substr(0, 4) == "DYCE") ex = Exactness::kExact;
  else if (bytes.substr(0, 4) == "DYCO") ex = Exactness::kOuter;
  else throw UsageError("binary cover has a bad magic number");
  const auto depth = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  const std::uint64_t span = get_le(bytes, 8, 4);
  const std::uint64_t count = get_le(bytes, 12, 4);
  if (bytes.size() != 16 + 8 * count) throw UsageError("binary cover length does not match its count");
  std::vector<std::uint64_t> idx(count);
  for (std::uint64_t n = 0; n < count; ++n) idx[n] = get_le(bytes, 16 + 8 * n, 8);
  return CellCover(depth, span, std::move(idx), ex);
}

RuleUnion parse_rule_union(std::string_view text) {
  struct Pending {
    std::uint64_t cutoff = kUnbounded;
    std::vector<PositionInterval> forced, free;
    bool any = false;
  };
  RuleUnion u;
  Pending cur;
  auto flush = [&](std::size_t lineno) {
    if (!cur.any) return;
    if (!cur.free.empty()) {
      if (!cur.forced.empty()) throw UsageError("line " + std::to_string(lineno) + ": a rule mixes 'free' and 'forced'");
      u.rules.push_back(ZeroForcedRule::from_free(IntervalSet(cur.free), cur.cutoff));
    } else {
      u.rules.push_back(ZeroForcedRule(IntervalSet(cur.forced), cur.cutoff));
    }
    cur = Pending{};
  };
  std::size_t last = 0;
  for_each_line(text, [&](const std::vector<std::string_view>& t, std::size_t lineno) {
    last = lineno;
    const auto where = "line " + std::to_string(lineno);
    if (t[0] == "or") {
      if (!cur.any) throw UsageError(where + ": 'or' without a preceding rule");
      flush(lineno);
      return;
    }
    cur.any = true;
    if (t[0] == "cutoff" && t.size() == 2) {
      cur.cutoff = t[1] == "inf" ? kUnbounded : parse_u64(t[1], "cutoff");
    } else if ((t[0] == "forced" || t[0] == "free") && (t.size() == 2 || t.size() == 3)) {
      const std::uint64_t lo = parse_u64(t[1], "position");
      const std::uint64_t hi = t.size() == 2 ? lo : (t[2] == "inf" ? kUnbounded : parse_u64(t[2], "position"));
      if (lo == 0 || hi < lo) throw UsageError(where + ": positions are 1-based with lo <= hi");
      (t[0] == "forced" ? cur.forced : cur.free).push_back({lo, hi});
    } else if (t[0] == "empty" && t.size() == 1) {
      // a rule with nothing forced
    } else {
      throw UsageError(where + ": expected 'cutoff', 'forced', 'free', 'empty' or 'or'");
    }
  });
  flush(last);
  return u;
}

std::string format_rule_union(const RuleUnion& u) {
  std::ostringstream os;
  for (std::size_t r = 0; r < u.rules.size(); ++r) {
    if (r > 0) os << "or\n";
    const auto& rule = u.rules[r];
    if (rule.cutoff_depth() == kUnbounded) os << "cutoff inf\n";
    else os << "cutoff " << rule.cutoff_depth() << '\n';
    if (rule.forced().empty()) os << "empty\n";
    for (const auto& iv : rule.forced().intervals()) {
      os << "forced " << iv.lo << ' ';
      if (iv.hi == kUnbounded) os << "inf"; else os << iv.hi;
      os << '\n';
    }
  }
  return os.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& p, std::string_view content) {
  const auto tmp = p.parent_path() / (p.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw UsageError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) throw UsageError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

}  // namespace dyadfrac
