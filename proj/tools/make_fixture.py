#!/usr/bin/env python3
"""Generate the stand-in 144-gene fixture under data/fixture/.

The gene symbols, coordinates, QTL tables and molecular-genetics records are
synthetic. They mimic the shape of GTEx per-tissue significance exports and
OMIM-style narratives so the whole pipeline can be exercised offline.
Output is deterministic for a given --seed.
"""

import argparse
import json
import random
import string
from pathlib import Path

REGIONS = [
    "frontal_cortex",
    "amygdala",
    "anterior_cingulate_cortex",
    "caudate_basal_ganglia",
    "cerebellar_hemisphere",
    "cerebellum",
    "nucleus_accumbens_basal_ganglia",
    "putamen_basal_ganglia",
    "cervical_spinal_cord",
    "cortex",
    "hypothalamus",
    "hippocampus",
    "substantia_nigra",
]
KINDS = ["eQTL", "sQTL"]
CHROMOSOMES = [str(i) for i in range(1, 23)] + ["X"]

MECHANISMS = [
    "variant increases amyloid burden",
    "loss-of-function alleles impair microglial clearance of amyloid-beta",
    "risk haplotype alters tau phosphorylation in neurons",
    "rare coding variants disrupt lipid transport in astrocytes",
    "altered splicing reduces synaptic vesicle recycling",
    "missense mutation shifts gamma-secretase cleavage toward longer amyloid peptides",
    "promoter variant lowers expression of a neuroprotective chaperone",
    "duplication of the locus raises amyloid precursor protein dosage",
    "variant impairs endosomal trafficking of amyloid precursor protein",
    "reduced expression weakens complement-mediated synapse protection",
]

UNRELATED = [
    "variants are reported in a congenital skeletal dysplasia",
    "mutations cause an inherited retinal dystrophy",
    "the gene is implicated in a rare hepatic metabolic disorder",
    "deletions are associated with a cardiac conduction defect",
]


def gene_symbols(n):
    """GENEA..GENEZ, then GENEAA, GENEAB, ... (base-26 suffixes)."""
    out = []
    letters = string.ascii_uppercase
    for c in letters:
        out.append("GENE" + c)
    for a in letters:
        for b in letters:
            out.append("GENE" + a + b)
    return out[:n]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "fixture"))
    ap.add_argument("--genes", type=int, default=144)
    ap.add_argument("--seed", type=int, default=20250101)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    (out / "qtl").mkdir(parents=True, exist_ok=True)

    symbols = gene_symbols(args.genes)

    with open(out / "seed_genes.txt", "w") as f:
        f.write("# Stand-in seed gene list (synthetic symbols)\n")
        for s in symbols:
            f.write(s + "\n")

    annotations = {}
    with open(out / "gene_annotations.tsv", "w") as f:
        f.write("gene_symbol\tchromosome\tstart\tend\tstrand\n")
        for i, s in enumerate(symbols):
            if i == 0:
                chrom, start, end, strand = "19", 1000, 2000, "+"
            else:
                chrom = rng.choice(CHROMOSOMES)
                start = rng.randint(100_000, 150_000_000)
                end = start + rng.randint(0, 250_000)
                strand = rng.choice("+-")
            annotations[s] = (chrom, start, end, strand)
            f.write(f"{s}\t{chrom}\t{start}\t{end}\t{strand}\n")

    manifest_qtl = []
    for region in REGIONS:
        for kind in KINDS:
            rel = f"qtl/{region}.{kind}.tsv"
            manifest_qtl.append((rel, region, kind))
            with open(out / rel, "w") as f:
                f.write("gene_symbol\tvariant_id\tq_value\n")
                for s in symbols:
                    if rng.random() < 0.4:
                        continue
                    chrom, start, _, _ = annotations[s]
                    used = set()
                    for _ in range(rng.randint(1, 3)):
                        pos = max(1, start + rng.randint(-1_000_000, 1_000_000))
                        ref, alt = rng.sample("ACGT", 2)
                        vid = f"chr{chrom}_{pos}_{ref}_{alt}_b38"
                        if vid in used:
                            continue
                        used.add(vid)
                        r = rng.random()
                        if r < 0.05:
                            q = 0.05
                        elif r < 0.55:
                            q = round(rng.uniform(0.0, 0.05), 6)
                        else:
                            q = round(rng.uniform(0.05, 0.3), 6)
                        f.write(f"{s}\t{vid}\t{q}\n")

    with open(out / "molecular_genetics.jsonl", "w") as f:
        for i, s in enumerate(symbols):
            if i % 9 == 8:
                continue  # no curated record for this gene
            related = i % 3 != 2
            if related:
                reasoning = rng.choice(MECHANISMS)
                summary = (
                    f"Functional studies of {s} report that {reasoning}. "
                    f"Additional case-control cohorts describe modest association signals."
                )
            else:
                reasoning = ""
                summary = f"In the reported families, {rng.choice(UNRELATED)}."
            rec = {
                "gene_symbol": s,
                "summary_text": summary,
                "curated_reasoning": reasoning,
                "ad_related": related,
                "citations": [f"OMIM stand-in {600000 + i}"],
            }
            f.write(json.dumps(rec, sort_keys=True) + "\n")

    with open(out / "manifest.toml", "w") as f:
        f.write("# Stand-in fixture manifest (synthetic data)\n")
        f.write('seed_genes = "seed_genes.txt"\n')
        f.write("significance_alpha = 0.05\n\n")
        f.write("[annotations]\n")
        f.write('file = "gene_annotations.tsv"\n')
        f.write('source = "GTEx gene annotation (stand-in fixture)"\n\n')
        f.write("[molecular_genetics]\n")
        f.write('file = "molecular_genetics.jsonl"\n\n')
        f.write("[qtl]\n")
        for rel, region, kind in manifest_qtl:
            f.write(f'"{rel}" = {{ region = "{region}", kind = "{kind}" }}\n')


if __name__ == "__main__":
    main()
