//! Structural code report shared by the human and machine CLI outputs.

use std::fmt::Write as _;

use crate::construct::{witness_codeword, Alphabet, ConstructionSpec, Family, WitnessFamily};
use crate::error::Result;
use crate::linalg::{min_distance, structural_lower_bound, MinDistance};
use crate::pseudo::tree_bound;
use crate::tanner::TannerGraph;

#[derive(Clone, Debug)]
pub struct AnalyzeReport {
    pub describe: String,
    pub alphabet: u32,
    pub n: usize,
    pub m: usize,
    pub degree: Option<usize>,
    pub min_var_degree: usize,
    pub girth: Option<usize>,
    pub diameter: Option<usize>,
    pub dimension: usize,
    pub rate: f64,
    pub tree_bound: Option<usize>,
    pub witness_weight: Option<usize>,
    pub min_distance: MinDistance,
}

/// Builds the graph and collects every structural parameter of the report.
///
/// The minimum distance comes from exhaustive enumeration below the cap;
/// above it, a matching tree bound and witness weight settle the value
/// exactly and anything else falls back to the enumeration bounds, with the
/// witness weight as an upper bound.
pub fn analyze(spec: &ConstructionSpec, alphabet: Alphabet, cap: u64) -> Result<AnalyzeReport> {
    let graph = spec.build()?;
    let p = spec.p.unwrap_or(2);
    let modulus = match alphabet {
        Alphabet::Binary => 2,
        Alphabet::Pary => p,
    };
    let witness_weight = witness_for(spec, alphabet, &graph, modulus)?;
    let h = graph.to_matrix(modulus);
    let dimension = h.dimension();
    let n = graph.n_var();
    let girth = graph.girth();
    let min_var_degree = graph.min_var_degree();
    let tree = match girth {
        Some(g) if g >= 6 && min_var_degree >= 2 => tree_bound(min_var_degree, g).ok(),
        _ => None,
    };
    let dmin = {
        let total = (modulus as u64).checked_pow(dimension as u32);
        let within_cap = total.is_some_and(|t| t <= cap);
        let lower = structural_lower_bound(&h);
        if !within_cap && witness_weight == Some(lower) {
            MinDistance::Exact(lower)
        } else {
            match min_distance(&h, cap) {
                MinDistance::Bounds { lower, upper } => {
                    let upper = match (upper, witness_weight) {
                        (Some(u), Some(w)) => Some(u.min(w)),
                        (None, w) => w,
                        (u, None) => u,
                    };
                    if upper == Some(lower) {
                        MinDistance::Exact(lower)
                    } else {
                        MinDistance::Bounds { lower, upper }
                    }
                }
                exact => exact,
            }
        }
    };
    Ok(AnalyzeReport {
        describe: spec.describe(),
        alphabet: modulus,
        n,
        m: graph.n_chk(),
        degree: graph.regular_degree(),
        min_var_degree,
        girth,
        diameter: graph.diameter().ok(),
        dimension,
        rate: dimension as f64 / n as f64,
        tree_bound: tree,
        witness_weight,
        min_distance: dmin,
    })
}

fn witness_for(
    spec: &ConstructionSpec,
    alphabet: Alphabet,
    graph: &TannerGraph,
    modulus: u32,
) -> Result<Option<usize>> {
    let family = match spec.family {
        Family::TypeIb => WitnessFamily::TypeIb,
        Family::TypeIiL3 => WitnessFamily::TypeIiL3,
        _ => return Ok(None),
    };
    let (p, s) = (spec.p.unwrap_or(2), spec.s.unwrap_or(1));
    let word = match witness_codeword(family, p, s, alphabet) {
        Ok(word) => word,
        Err(_) => return Ok(None),
    };
    debug_assert!(graph.to_matrix(modulus).is_codeword(&word)?);
    Ok(Some(word.iter().filter(|&&x| x != 0).count()))
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or_else(|| "inf".into(), |x| x.to_string())
}

impl AnalyzeReport {
    /// One key=value pair per line.
    pub fn machine_format(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "code={}", self.describe);
        let _ = writeln!(out, "alphabet={}", self.alphabet);
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "m={}", self.m);
        let _ = writeln!(
            out,
            "degree={}",
            self.degree
                .map_or_else(|| "irregular".into(), |d| d.to_string())
        );
        let _ = writeln!(out, "girth={}", fmt_opt(self.girth));
        let _ = writeln!(
            out,
            "diameter={}",
            self.diameter
                .map_or_else(|| "disconnected".into(), |d| d.to_string())
        );
        let _ = writeln!(out, "dimension={}", self.dimension);
        let _ = writeln!(out, "rate={:.6}", self.rate);
        let _ = writeln!(out, "tree_bound={}", fmt_opt(self.tree_bound));
        if let Some(w) = self.witness_weight {
            let _ = writeln!(out, "witness_weight={w}");
        }
        match &self.min_distance {
            MinDistance::Trivial => {
                let _ = writeln!(out, "d_min=trivial");
            }
            MinDistance::Exact(d) => {
                let _ = writeln!(out, "d_min={d}");
                let _ = writeln!(out, "d_min_exact=true");
            }
            MinDistance::Bounds { lower, upper } => {
                let _ = writeln!(out, "d_min_lower={lower}");
                if let Some(u) = upper {
                    let _ = writeln!(out, "d_min_upper={u}");
                }
                let _ = writeln!(out, "d_min_exact=false");
            }
        }
        out
    }

    /// Short multi-line description for people.
    pub fn human_format(&self) -> String {
        let dmin = match &self.min_distance {
            MinDistance::Trivial => "trivial code (dimension 0)".into(),
            MinDistance::Exact(d) => format!("{d} (exact)"),
            MinDistance::Bounds { lower, upper } => match upper {
                Some(u) => format!("in [{lower}, {u}] (enumeration capped)"),
                None => format!(">= {lower} (enumeration capped)"),
            },
        };
        let mut out = String::new();
        let _ = writeln!(out, "{} over GF({})", self.describe, self.alphabet);
        let _ = writeln!(
            out,
            "  length n = {}, checks m = {}, regular degree = {}",
            self.n,
            self.m,
            self.degree
                .map_or_else(|| "irregular".into(), |d| d.to_string())
        );
        let _ = writeln!(
            out,
            "  girth = {}, diameter = {}",
            fmt_opt(self.girth),
            self.diameter
                .map_or_else(|| "disconnected".into(), |d| d.to_string())
        );
        let _ = writeln!(
            out,
            "  dimension k = {}, rate = {:.4}, tree bound = {}",
            self.dimension,
            self.rate,
            fmt_opt(self.tree_bound)
        );
        if let Some(w) = self.witness_weight {
            let _ = writeln!(out, "  witness codeword weight = {w}");
        }
        let _ = writeln!(out, "  minimum distance = {dmin}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Family;

    fn spec(family: Family, p: u32, s: u32) -> ConstructionSpec {
        let mut spec = ConstructionSpec::new(family);
        spec.p = Some(p);
        spec.s = Some(s);
        spec
    }

    #[test]
    fn analyze_pg_21_11() {
        let r = analyze(&spec(Family::TypeIiL3, 2, 2), Alphabet::Binary, 1 << 24).unwrap();
        assert_eq!(r.n, 21);
        assert_eq!(r.dimension, 11);
        assert_eq!(r.girth, Some(6));
        assert_eq!(r.diameter, Some(3));
        assert_eq!(r.tree_bound, Some(6));
        assert_eq!(r.min_distance, MinDistance::Exact(6));
        assert_eq!(r.witness_weight, Some(6));
    }

    #[test]
    fn analyze_type1a_ell4() {
        let mut s = ConstructionSpec::new(Family::TypeIa);
        s.ell = Some(4);
        let r = analyze(&s, Alphabet::Binary, 1 << 24).unwrap();
        assert_eq!(r.n, 22);
        assert_eq!(r.girth, Some(8));
        assert_eq!(r.tree_bound, Some(6));
        assert_eq!(r.min_distance, MinDistance::Exact(8));
    }

    #[test]
    fn analyze_ternary_type1b() {
        let r = analyze(&spec(Family::TypeIb, 3, 1), Alphabet::Pary, 1 << 24).unwrap();
        assert_eq!(r.dimension, 2);
        assert_eq!(r.min_distance, MinDistance::Exact(6));
        assert_eq!(r.alphabet, 3);
    }

    #[test]
    fn binary_repetition_structure_for_odd_p() {
        // Binary reading of the (3,1) projective-plane graph: a [13,1,13]
        // repetition code whose single basis vector is all-ones.
        let g = crate::construct::type2_l3(3, 1).unwrap();
        let h = g.to_matrix(2);
        let basis = h.nullspace_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![1u8; 13]);
        let r = analyze(&spec(Family::TypeIiL3, 3, 1), Alphabet::Binary, 1 << 24).unwrap();
        assert_eq!(r.dimension, 1);
        assert_eq!(r.min_distance, MinDistance::Exact(13));
    }

    #[test]
    fn witness_plus_tree_settles_large_pg_instance() {
        // [73, 45] with 2^45 words: the witness weight 10 meets the tree
        // bound, so the distance resolves without enumeration.
        let r = analyze(&spec(Family::TypeIiL3, 2, 3), Alphabet::Binary, 1 << 24).unwrap();
        assert_eq!(r.dimension, 45);
        assert_eq!(r.min_distance, MinDistance::Exact(10));
    }

    #[test]
    fn pary_beyond_cap_reports_witness_bounds() {
        // 7-ary (7,1): dimension 16 is far past any enumeration cap, so the
        // report carries the tree lower bound and the witness upper bound.
        let r = analyze(&spec(Family::TypeIb, 7, 1), Alphabet::Pary, 1 << 20).unwrap();
        assert_eq!(r.dimension, 16);
        assert_eq!(r.witness_weight, Some(15));
        assert_eq!(r.min_distance, MinDistance::Bounds { lower: 8, upper: Some(15) });
        let machine = r.machine_format();
        assert!(machine.contains("d_min_lower=8"));
        assert!(machine.contains("d_min_upper=15"));
        assert!(machine.contains("d_min_exact=false"));
    }

    #[test]
    fn formats_share_the_values() {
        let r = analyze(&spec(Family::TypeIiL3, 2, 1), Alphabet::Binary, 1 << 24).unwrap();
        let machine = r.machine_format();
        assert!(machine.contains("n=7"));
        assert!(machine.contains("dimension=3"));
        assert!(machine.contains("d_min=4"));
        let human = r.human_format();
        assert!(human.contains("4 (exact)"));
    }
}
