#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "adgpt/ingest/manifest.hpp"
#include "adgpt/ingest/parsers.hpp"
#include "support.hpp"

using namespace adgpt;
using namespace adgpt::ingest;
using testing::code_of;

namespace {

std::istringstream text(const std::string& s) { return std::istringstream(s); }

const std::string kAnnHeader = "gene_symbol\tchromosome\tstart\tend\tstrand\n";
const std::string kQtlHeader = "gene_symbol\tvariant_id\tq_value\n";

std::string mg_line(const std::string& gene, const std::string& reasoning, bool ad) {
  nlohmann::json j{{"gene_symbol", gene},
                   {"summary_text", "summary of " + gene},
                   {"curated_reasoning", reasoning},
                   {"ad_related", ad},
                   {"citations", {"cite " + gene}}};
  return j.dump() + "\n";
}

}  // namespace

TEST_CASE("seed genes: echo, dedup, comments") {
  auto in = text("APOE\nTREM2\n");
  CHECK(parse_seed_genes(in).symbols == std::vector<std::string>{"APOE", "TREM2"});
  auto in2 = text("# header\nAPOE\nAPOE\n");
  CHECK(parse_seed_genes(in2).symbols == std::vector<std::string>{"APOE"});
  auto crlf = text("APOE\r\n\r\nPSEN1\r\n");
  CHECK(parse_seed_genes(crlf).symbols == std::vector<std::string>{"APOE", "PSEN1"});
}

TEST_CASE("seed genes: errors") {
  CHECK(code_of([] { auto in = text("# only a comment\n\n"); parse_seed_genes(in); }) == ErrorCode::kEmptyList);
  CHECK(code_of([] { auto in = text("APOE\napoe\n"); parse_seed_genes(in); }) == ErrorCode::kMalformedSymbol);
  CHECK(code_of([] { auto in = text("-BAD\n"); parse_seed_genes(in); }) == ErrorCode::kMalformedSymbol);
  try {
    auto in = text("APOE\nTREM2\nbad sym\n");
    parse_seed_genes(in);
    FAIL("expected MalformedSymbol");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("seed genes: fixture has 144 symbols by independent line count") {
  std::ifstream raw(testing::fixture_dir() / "seed_genes.txt");
  std::string line;
  std::size_t oracle = 0;
  while (std::getline(raw, line)) {
    if (!line.empty() && line[0] != '#') ++oracle;
  }
  std::ifstream in(testing::fixture_dir() / "seed_genes.txt");
  const auto seed = parse_seed_genes(in);
  CHECK(oracle == 144);
  CHECK(seed.symbols.size() == oracle);
}

TEST_CASE("annotations: field mapping and boundaries") {
  auto in = text(kAnnHeader + "GENEA\t19\t1000\t2000\t+\nGENEB\tchrX\t500\t500\t-\n");
  const auto rows = parse_gene_annotations(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == GeneAnnotation{"GENEA", "19", 1000, 2000, Strand::kPlus});
  CHECK(rows[1] == GeneAnnotation{"GENEB", "X", 500, 500, Strand::kMinus});

  // Column order is free.
  auto shuffled = text("strand\tend\tgene_symbol\tstart\tchromosome\n+\t2000\tGENEA\t1000\t19\n");
  CHECK(parse_gene_annotations(shuffled).front() == rows[0]);

  // U+2212 minus sign.
  auto unicode = text(kAnnHeader + "GENEC\tMT\t1\t9\t\xE2\x88\x92\n");
  CHECK(parse_gene_annotations(unicode).front().strand == Strand::kMinus);
}

TEST_CASE("annotations: every malformed row maps to one declared error") {
  const std::map<std::string, ErrorCode> cases{
      {"gene_symbol\tchromosome\tstart\tend\nGENEA\t1\t1\t2\n", ErrorCode::kMissingColumn},
      {kAnnHeader + "GENEA\t1\t20\t10\t+\n", ErrorCode::kCoordinateOrder},
      {kAnnHeader + "GENEA\t1\t1\t10\t*\n", ErrorCode::kBadStrand},
      {kAnnHeader + "GENEA\t23\t1\t10\t+\n", ErrorCode::kBadChromosome},
      {kAnnHeader + "GENEA\tchrQ\t1\t10\t+\n", ErrorCode::kBadChromosome},
      {kAnnHeader + "GENEA\t1\tabc\t10\t+\n", ErrorCode::kMalformedRow},
      {kAnnHeader + "GENEA\t1\t0\t10\t+\n", ErrorCode::kMalformedRow},
      {kAnnHeader + "GENEA\t1\t1\t10\n", ErrorCode::kMalformedRow},
      {kAnnHeader + "genea\t1\t1\t10\t+\n", ErrorCode::kMalformedSymbol},
      {"", ErrorCode::kMissingColumn},
  };
  for (const auto& [input, code] : cases) {
    CAPTURE(input);
    CHECK(code_of([&] { auto in = text(input); parse_gene_annotations(in); }) == code);
  }
}

TEST_CASE("annotations: fixture matches an independent row-by-row re-parse") {
  std::ifstream raw(testing::fixture_dir() / "gene_annotations.tsv");
  std::string line;
  std::getline(raw, line);
  std::vector<GeneAnnotation> oracle;
  while (std::getline(raw, line)) {
    std::istringstream ss(line);
    GeneAnnotation a;
    std::string strand;
    ss >> a.symbol >> a.chromosome >> a.start >> a.end >> strand;
    a.strand = strand == "+" ? Strand::kPlus : Strand::kMinus;
    oracle.push_back(a);
  }
  std::ifstream in(testing::fixture_dir() / "gene_annotations.tsv");
  const auto rows = parse_gene_annotations(in);
  CHECK(rows.size() == 144);
  CHECK(rows == oracle);
  for (const auto& r : rows) CHECK(r.start <= r.end);
}

TEST_CASE("qtl table: stamping, empty, range") {
  auto in = text(kQtlHeader + "GENEA\tv1\t0.01\nGENEA\tv2\t0.2\nGENEB\tv3\t1e-8\n");
  const auto rows = parse_qtl_table(in, QtlKind::kSqtl, BrainRegion::kHippocampus);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.region == BrainRegion::kHippocampus);
    CHECK(r.kind == QtlKind::kSqtl);
  }
  CHECK(rows[2].q_value == doctest::Approx(1e-8));

  auto empty = text(kQtlHeader);
  CHECK(parse_qtl_table(empty, QtlKind::kEqtl, BrainRegion::kCortex).empty());

  CHECK(code_of([&] { auto s = text(kQtlHeader + "GENEA\tv1\t1.5\n"); parse_qtl_table(s, QtlKind::kEqtl, BrainRegion::kCortex); }) ==
        ErrorCode::kQValueRange);
  CHECK(code_of([&] { auto s = text(kQtlHeader + "GENEA\tv1\t-0.1\n"); parse_qtl_table(s, QtlKind::kEqtl, BrainRegion::kCortex); }) ==
        ErrorCode::kQValueRange);
  CHECK(code_of([&] { auto s = text(kQtlHeader + "GENEA\tv1\tnan\n"); parse_qtl_table(s, QtlKind::kEqtl, BrainRegion::kCortex); }) ==
        ErrorCode::kQValueRange);
  CHECK(code_of([&] { auto s = text(kQtlHeader + "GENEA\tv1\tlow\n"); parse_qtl_table(s, QtlKind::kEqtl, BrainRegion::kCortex); }) ==
        ErrorCode::kMalformedRow);
  CHECK(code_of([&] { auto s = text(kQtlHeader + "GENEA\t\t0.1\n"); parse_qtl_table(s, QtlKind::kEqtl, BrainRegion::kCortex); }) ==
        ErrorCode::kMalformedRow);
}

TEST_CASE("raw qtl rows resolve region and kind labels") {
  auto in = text(kQtlHeader + "GENEA\tv1\t0.01\n");
  const auto raw = parse_raw_qtl_rows(in, "Brain - Hippocampus", "sQTL");
  REQUIRE(raw.size() == 1);
  const auto rec = resolve_qtl_row(raw[0]);
  CHECK(rec.region == BrainRegion::kHippocampus);
  CHECK(rec.kind == QtlKind::kSqtl);
  CHECK(code_of([&] { resolve_qtl_row(RawQtlRow{"GENEA", "v", 0.1, "liver", "eQTL"}); }) == ErrorCode::kUnknownRegion);
}

TEST_CASE("molecular genetics: accepted, missing reasoning, duplicates") {
  auto ok = text(mg_line("GENEA", "variant increases amyloid burden", true));
  const auto recs = parse_molecular_genetics(ok);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].curated_reasoning == "variant increases amyloid burden");
  CHECK(recs[0].citations == std::vector<std::string>{"cite GENEA"});

  CHECK(code_of([] { auto in = text(mg_line("GENEB", "", true)); parse_molecular_genetics(in); }) ==
        ErrorCode::kMissingReasoning);
  CHECK(code_of([] { auto in = text(mg_line("GENEB", "  ", true)); parse_molecular_genetics(in); }) ==
        ErrorCode::kMissingReasoning);
  CHECK(code_of([] {
          auto in = text(mg_line("GENEB", "", false) + mg_line("GENEB", "", false));
          parse_molecular_genetics(in);
        }) == ErrorCode::kDuplicateGene);
  CHECK(code_of([] { auto in = text("{not json\n"); parse_molecular_genetics(in); }) == ErrorCode::kMalformedRow);
  CHECK(code_of([] { auto in = text("{\"gene_symbol\":\"GENEA\"}\n"); parse_molecular_genetics(in); }) ==
        ErrorCode::kMalformedRow);
}

TEST_CASE("molecular genetics: 10 records, 7 AD-related") {
  std::string s;
  for (int i = 0; i < 10; ++i) {
    const bool ad = i < 7;
    s += mg_line("GENE" + std::string(1, static_cast<char>('A' + i)), ad ? "reason " + std::to_string(i) : "", ad);
  }
  auto in = text(s);
  const auto recs = parse_molecular_genetics(in);
  CHECK(recs.size() == 10);
  CHECK(std::count_if(recs.begin(), recs.end(), [](const auto& r) { return r.ad_related; }) == 7);
}

TEST_CASE("round-trip: write then parse gives the same records") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> chrom(1, 22), coord(1, 1'000'000);
  std::uniform_real_distribution<double> q(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GeneAnnotation> ann;
    std::vector<QtlRecord> qtl;
    std::vector<MolecularGeneticsRecord> mg;
    SeedGeneList seed;
    for (int i = 0; i < 15; ++i) {
      const std::string sym = "G" + std::to_string(trial) + "-" + std::to_string(i);
      const std::int64_t a = coord(rng), b = coord(rng);
      ann.push_back({sym, std::to_string(chrom(rng)), std::min(a, b), std::max(a, b),
                     i % 2 ? Strand::kPlus : Strand::kMinus});
      qtl.push_back({sym, "var" + std::to_string(i), BrainRegion::kAmygdala, QtlKind::kEqtl, q(rng)});
      mg.push_back({sym, "summary \"quoted\" " + sym, i % 3 ? "reason\t" + sym : "", i % 3 != 0, {"c1", "c2"}});
      seed.symbols.push_back(sym);
    }
    std::stringstream s1, s2, s3, s4;
    write_gene_annotations(s1, ann);
    write_qtl_table(s2, qtl);
    write_molecular_genetics(s3, mg);
    write_seed_genes(s4, seed);
    CHECK(parse_gene_annotations(s1) == ann);
    CHECK(parse_qtl_table(s2, QtlKind::kEqtl, BrainRegion::kAmygdala) == qtl);
    CHECK(parse_molecular_genetics(s3) == mg);
    CHECK(parse_seed_genes(s4) == seed);
  }
}

TEST_CASE("line formats: parse(a ++ b) == parse(a) ++ parse(b)") {
  const std::string a = "GENEA\tv1\t0.01\nGENEB\tv2\t0.5\n";
  const std::string b = "GENEC\tv3\t0.05\n";
  auto sa = text(kQtlHeader + a), sb = text(kQtlHeader + b), sab = text(kQtlHeader + a + b);
  auto ra = parse_qtl_table(sa, QtlKind::kEqtl, BrainRegion::kCortex);
  const auto rb = parse_qtl_table(sb, QtlKind::kEqtl, BrainRegion::kCortex);
  ra.insert(ra.end(), rb.begin(), rb.end());
  CHECK(parse_qtl_table(sab, QtlKind::kEqtl, BrainRegion::kCortex) == ra);

  auto s1 = text("APOE\nTREM2\n"), s2 = text("PSEN1\n"), s12 = text("APOE\nTREM2\nPSEN1\n");
  auto l1 = parse_seed_genes(s1).symbols;
  const auto l2 = parse_seed_genes(s2).symbols;
  l1.insert(l1.end(), l2.begin(), l2.end());
  CHECK(parse_seed_genes(s12).symbols == l1);

  const std::string m1 = mg_line("GENEA", "r", true), m2 = mg_line("GENEB", "", false);
  auto t1 = text(m1), t2 = text(m2), t12 = text(m1 + m2);
  auto v1 = parse_molecular_genetics(t1);
  const auto v2 = parse_molecular_genetics(t2);
  v1.insert(v1.end(), v2.begin(), v2.end());
  CHECK(parse_molecular_genetics(t12) == v1);
}

TEST_CASE("manifest: fixture loads and QTL total equals per-file row sums") {
  const auto m = load_manifest(testing::fixture_dir() / "manifest.toml");
  CHECK(m.qtl_files.size() == 26);
  CHECK(m.significance_alpha == doctest::Approx(0.05));
  const auto& data = testing::fixture_data();
  std::size_t oracle = 0;
  for (const auto& f : m.qtl_files) {
    std::ifstream in(m.base_dir / f.file);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) oracle += !line.empty();
  }
  CHECK(data.qtls.size() == oracle);
  std::size_t per_file = 0;
  for (auto n : data.qtl_rows_per_file) per_file += n;
  CHECK(per_file == oracle);
}

TEST_CASE("manifest: errors name the file") {
  testing::TempDir dir("manifest");
  {
    std::ofstream(dir / "m.toml") << "seed_genes = \"missing.txt\"\n[annotations]\nfile = \"a.tsv\"\n";
  }
  CHECK(code_of([&] { ingest_all(load_manifest(dir / "m.toml")); }) == ErrorCode::kIoError);
  {
    std::ofstream(dir / "bad.toml") << "seed_genes = \"s.txt\"\n[annotations]\nfile = \"a.tsv\"\n[qtl]\n\"x.tsv\" = { region = \"liver\", kind = \"eQTL\" }\n";
  }
  CHECK(code_of([&] { load_manifest(dir / "bad.toml"); }) == ErrorCode::kUnknownRegion);
  {
    std::ofstream(dir / "broken.toml") << "seed_genes = [\n";
  }
  CHECK(code_of([&] { load_manifest(dir / "broken.toml"); }) == ErrorCode::kManifestError);

  {
    std::ofstream(dir / "s.txt") << "GENEA\n";
    std::ofstream(dir / "a.tsv") << kAnnHeader << "GENEA\t1\t5\t2\t+\n";
    std::ofstream(dir / "ok.toml") << "seed_genes = \"s.txt\"\n[annotations]\nfile = \"a.tsv\"\n";
  }
  try {
    ingest_all(load_manifest(dir / "ok.toml"));
    FAIL("expected CoordinateOrder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCoordinateOrder);
    CHECK(std::string(e.what()).find("a.tsv") != std::string::npos);
  }
}
