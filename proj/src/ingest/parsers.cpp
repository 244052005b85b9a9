#include "adgpt/ingest/parsers.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "adgpt/error.hpp"

namespace adgpt::ingest {
namespace {

using json = nlohmann::json;

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(trim(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos)));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

std::string at_line(std::size_t line_no) { return " at line " + std::to_string(line_no); }

// Maps the required column names onto their positions in the header row.
template <std::size_t N>
std::array<std::size_t, N> locate_columns(std::istream& in, const std::array<std::string_view, N>& names,
                                          std::size_t& line_no, std::size_t& width) {
  std::string header;
  while (read_line(in, header)) {
    ++line_no;
    if (!is_blank(header)) break;
    header.clear();
  }
  if (is_blank(header)) {
    throw Error(ErrorCode::kMissingColumn, "missing header row; expected column '" +
                                               std::string(names[0]) + "'");
  }
  const auto cols = split_tabs(header);
  width = cols.size();
  std::array<std::size_t, N> idx{};
  for (std::size_t i = 0; i < N; ++i) {
    bool found = false;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] == names[i]) {
        idx[i] = c;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kMissingColumn, "missing column '" + std::string(names[i]) + "'");
    }
  }
  return idx;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::optional<std::string> canonical_chromosome(std::string_view c) {
  if (c.size() > 3 && (c.substr(0, 3) == "chr" || c.substr(0, 3) == "CHR")) c.remove_prefix(3);
  if (c == "X" || c == "Y" || c == "MT") return std::string(c);
  if (c == "M") return std::string("MT");
  if (auto n = parse_int(c); n && *n >= 1 && *n <= 22 && c.front() != '0') {
    return std::to_string(*n);
  }
  return std::nullopt;
}

std::optional<Strand> parse_strand(std::string_view s) {
  if (s == "+") return Strand::kPlus;
  // ASCII hyphen or U+2212 MINUS SIGN
  if (s == "-" || s == "\xE2\x88\x92") return Strand::kMinus;
  return std::nullopt;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

bool is_valid_symbol(std::string_view symbol) {
  if (symbol.empty()) return false;
  auto ok = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); };
  if (!ok(symbol.front())) return false;
  for (char c : symbol) {
    if (!ok(c) && c != '-') return false;
  }
  return true;
}

SeedGeneList parse_seed_genes(std::istream& in) {
  SeedGeneList out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    const auto sym = trim(line);
    if (sym.empty() || sym.front() == '#') continue;
    if (!is_valid_symbol(sym)) {
      throw Error(ErrorCode::kMalformedSymbol,
                  "malformed gene symbol '" + std::string(sym) + "'" + at_line(line_no));
    }
    if (seen.insert(std::string(sym)).second) out.symbols.emplace_back(sym);
  }
  if (out.symbols.empty()) throw Error(ErrorCode::kEmptyList, "seed gene list is empty");
  return out;
}

std::vector<GeneAnnotation> parse_gene_annotations(std::istream& in) {
  static constexpr std::array<std::string_view, 5> kColumns{"gene_symbol", "chromosome", "start",
                                                            "end", "strand"};
  std::size_t line_no = 0;
  std::size_t width = 0;
  const auto col = locate_columns(in, kColumns, line_no, width);

  std::vector<GeneAnnotation> out;
  std::string line;
  while (read_line(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto f = split_tabs(line);
    if (f.size() != width) {
      throw Error(ErrorCode::kMalformedRow, "expected " + std::to_string(width) + " fields, got " +
                                                std::to_string(f.size()) + at_line(line_no));
    }
    GeneAnnotation a;
    const auto symbol = f[col[0]];
    if (!is_valid_symbol(symbol)) {
      throw Error(ErrorCode::kMalformedSymbol,
                  "malformed gene symbol '" + std::string(symbol) + "'" + at_line(line_no));
    }
    a.symbol = std::string(symbol);

    auto chrom = canonical_chromosome(f[col[1]]);
    if (!chrom) {
      throw Error(ErrorCode::kBadChromosome,
                  "bad chromosome '" + std::string(f[col[1]]) + "'" + at_line(line_no));
    }
    a.chromosome = std::move(*chrom);

    const auto start = parse_int(f[col[2]]);
    const auto end = parse_int(f[col[3]]);
    if (!start || !end || *start < 1 || *end < 1) {
      throw Error(ErrorCode::kMalformedRow,
                  "coordinates must be positive integers" + at_line(line_no));
    }
    if (*start > *end) {
      throw Error(ErrorCode::kCoordinateOrder, "start " + std::to_string(*start) + " > end " +
                                                   std::to_string(*end) + at_line(line_no));
    }
    a.start = *start;
    a.end = *end;

    const auto strand = parse_strand(f[col[4]]);
    if (!strand) {
      throw Error(ErrorCode::kBadStrand,
                  "bad strand '" + std::string(f[col[4]]) + "'" + at_line(line_no));
    }
    a.strand = *strand;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<RawQtlRow> parse_raw_qtl_rows(std::istream& in, std::string_view region_label,
                                          std::string_view qtl_kind_label) {
  static constexpr std::array<std::string_view, 3> kColumns{"gene_symbol", "variant_id",
                                                            "q_value"};
  std::size_t line_no = 0;
  std::size_t width = 0;
  const auto col = locate_columns(in, kColumns, line_no, width);

  std::vector<RawQtlRow> out;
  std::string line;
  while (read_line(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto f = split_tabs(line);
    if (f.size() != width) {
      throw Error(ErrorCode::kMalformedRow, "expected " + std::to_string(width) + " fields, got " +
                                                std::to_string(f.size()) + at_line(line_no));
    }
    if (f[col[0]].empty() || f[col[1]].empty() || f[col[2]].empty()) {
      throw Error(ErrorCode::kMalformedRow, "empty field" + at_line(line_no));
    }
    const auto q = parse_double(f[col[2]]);
    if (!q) {
      throw Error(ErrorCode::kMalformedRow,
                  "q_value '" + std::string(f[col[2]]) + "' is not a number" + at_line(line_no));
    }
    if (!std::isfinite(*q) || *q < 0.0 || *q > 1.0) {
      throw Error(ErrorCode::kQValueRange,
                  "q_value " + std::string(f[col[2]]) + " outside [0,1]" + at_line(line_no));
    }
    out.push_back(RawQtlRow{std::string(f[col[0]]), std::string(f[col[1]]), *q,
                            std::string(region_label), std::string(qtl_kind_label)});
  }
  return out;
}

QtlRecord resolve_qtl_row(const RawQtlRow& row) {
  const auto region = parse_region(row.region_label);
  if (!region) throw Error(ErrorCode::kUnknownRegion, "unknown brain region '" + row.region_label + "'");
  const auto kind = parse_qtl_kind(row.qtl_kind_label);
  if (!kind) throw Error(ErrorCode::kMalformedRow, "unknown QTL kind '" + row.qtl_kind_label + "'");
  return QtlRecord{row.gene_symbol, row.variant_id, *region, *kind, row.q_value};
}

std::vector<QtlRecord> parse_qtl_table(std::istream& in, QtlKind kind, BrainRegion region) {
  const auto raw = parse_raw_qtl_rows(in, region_id(region), qtl_kind_name(kind));
  std::vector<QtlRecord> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(resolve_qtl_row(r));
  return out;
}

std::vector<MolecularGeneticsRecord> parse_molecular_genetics(std::istream& in) {
  std::vector<MolecularGeneticsRecord> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(ErrorCode::kMalformedRow, "not a JSON object" + at_line(line_no));
    }
    auto require_string = [&](const char* key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) {
        throw Error(ErrorCode::kMalformedRow,
                    std::string("missing or non-string '") + key + "'" + at_line(line_no));
      }
      return it->get<std::string>();
    };
    MolecularGeneticsRecord rec;
    rec.gene = require_string("gene_symbol");
    if (!is_valid_symbol(rec.gene)) {
      throw Error(ErrorCode::kMalformedSymbol,
                  "malformed gene symbol '" + rec.gene + "'" + at_line(line_no));
    }
    rec.summary_text = require_string("summary_text");
    rec.curated_reasoning = require_string("curated_reasoning");
    auto flag = obj.find("ad_related");
    if (flag == obj.end() || !flag->is_boolean()) {
      throw Error(ErrorCode::kMalformedRow, "missing or non-boolean 'ad_related'" + at_line(line_no));
    }
    rec.ad_related = flag->get<bool>();
    if (auto cit = obj.find("citations"); cit != obj.end() && !cit->is_null()) {
      if (!cit->is_array()) {
        throw Error(ErrorCode::kMalformedRow, "'citations' must be a list" + at_line(line_no));
      }
      for (const auto& c : *cit) {
        if (!c.is_string()) {
          throw Error(ErrorCode::kMalformedRow, "citation must be a string" + at_line(line_no));
        }
        rec.citations.push_back(c.get<std::string>());
      }
    }
    if (rec.ad_related && is_blank(rec.curated_reasoning)) {
      throw Error(ErrorCode::kMissingReasoning,
                  "gene " + rec.gene + " is ad_related but has no curated reasoning" +
                      at_line(line_no));
    }
    if (!seen.insert(rec.gene).second) {
      throw Error(ErrorCode::kDuplicateGene, "duplicate record for gene " + rec.gene + at_line(line_no));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_seed_genes(std::ostream& out, const SeedGeneList& seed) {
  for (const auto& s : seed.symbols) out << s << '\n';
}

void write_gene_annotations(std::ostream& out, const std::vector<GeneAnnotation>& rows) {
  out << "gene_symbol\tchromosome\tstart\tend\tstrand\n";
  for (const auto& a : rows) {
    out << a.symbol << '\t' << a.chromosome << '\t' << a.start << '\t' << a.end << '\t'
        << strand_symbol(a.strand) << '\n';
  }
}

void write_qtl_table(std::ostream& out, const std::vector<QtlRecord>& rows) {
  out << "gene_symbol\tvariant_id\tq_value\n";
  for (const auto& r : rows) {
    out << r.gene << '\t' << r.variant_id << '\t' << format_double(r.q_value) << '\n';
  }
}

void write_molecular_genetics(std::ostream& out,
                              const std::vector<MolecularGeneticsRecord>& records) {
  for (const auto& r : records) {
    json obj = {{"gene_symbol", r.gene},
                {"summary_text", r.summary_text},
                {"curated_reasoning", r.curated_reasoning},
                {"ad_related", r.ad_related},
                {"citations", r.citations}};
    out << obj.dump() << '\n';
  }
}

}  // namespace adgpt::ingest
