//! The chain of megaideals used to pin down the point symmetry group.

use serde::Serialize;

use super::algebra::{AlgVector, Algebra, D1, D2, D3, J, P, S};
use super::poly::q;
use super::subspace::{center, centralizer, derived, prop1, Subspace};
use crate::error::{invalid, Error, Result};

/// One computed megaideal next to its closed-form description.
#[derive(Clone, Debug)]
pub struct ChainEntry {
    pub label: String,
    pub computed: Subspace,
    pub analytic: Subspace,
    /// Agreement after discarding coordinates of degree above the check
    /// degree.
    pub low_degree_match: bool,
    /// Agreement on all coordinates, truncation boundary included.
    pub full_match: bool,
}

#[derive(Clone, Debug)]
pub struct MegaidealChain {
    pub algebra: Algebra,
    pub check_degree: usize,
    pub entries: Vec<ChainEntry>,
    /// `⟨Z(1), …, Z(tⁿ)⟩` for increasing `n`, iterated until it stabilizes.
    pub z_series: Vec<Subspace>,
    /// `⟨X(1,0), X(0,1), …, X(tⁿ,0), X(0,tⁿ), Z(α)⟩` likewise.
    pub x_series: Vec<Subspace>,
}

/// Serializable summary of one entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub label: String,
    pub dim: usize,
    pub analytic_dim: usize,
    pub low_degree_match: bool,
    pub full_match: bool,
    pub generators: Vec<String>,
}

impl MegaidealChain {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|e| e.low_degree_match)
    }

    pub fn summaries(&self) -> Vec<EntrySummary> {
        self.entries
            .iter()
            .map(|e| EntrySummary {
                label: e.label.clone(),
                dim: e.computed.dim(),
                analytic_dim: e.analytic.dim(),
                low_degree_match: e.low_degree_match,
                full_match: e.full_match,
                generators: e.computed.describe(&self.algebra),
            })
            .collect()
    }
}

fn xs(a: &Algebra, max_deg: usize) -> Vec<AlgVector> {
    (0..=max_deg.min(a.n())).flat_map(|k| [a.x(k, 0), a.x(k, 1)]).collect()
}

fn zs(a: &Algebra, max_deg: usize) -> Vec<AlgVector> {
    (0..=max_deg.min(a.m())).map(|k| a.z(k)).collect()
}

/// Closed-form descriptions of the eleven chain entries, in order.
fn analytic_entries(a: &Algebra) -> Vec<(&'static str, Subspace)> {
    let (n, m) = (a.n(), a.m());
    let span = |mut gens: Vec<AlgVector>, x_deg: Option<usize>, with_z: bool| {
        if let Some(d) = x_deg {
            gens.extend(xs(a, d));
        }
        if with_z {
            gens.extend(zs(a, m));
        }
        Subspace::span(a, &gens)
    };
    let s = |k| a.scalar(k);
    vec![
        ("<Z(1)>", span(vec![a.z(0)], None, false)),
        ("<Z(1), Z(t)>", span(vec![a.z(0), a.z(1)], None, false)),
        ("<S>", span(vec![s(S)], None, false)),
        ("<X(1,0), X(0,1), Z>", span(vec![], Some(0), true)),
        ("<X(t,0), X(0,t), X(1,0), X(0,1), Z>", span(vec![], Some(1), true)),
        ("<X(t^2,0), X(0,t^2), ..., X(0,1), Z>", span(vec![], Some(2), true)),
        ("<J, X, Z>", span(vec![s(J)], Some(n), true)),
        ("<P, X, Z>", span(vec![s(P)], Some(n), true)),
        ("<D1+D2, J, P, X, Z>", span(vec![s(D1).add(&s(D2)), s(J), s(P)], Some(n), true)),
        ("<D3, S>", span(vec![s(D3), s(S)], None, false)),
        (
            "<kD1-2D3, P, S, X, Z>",
            span(vec![s(D1).scale(a.kappa()).sub(&s(D3).scale(&q(2))), s(P), s(S)], Some(n), true),
        ),
    ]
}

/// Iterates `i2 ← prop1(i0, i1, i2)` from `start` until the result stops
/// growing; returns every distinct iterate.
fn iterate_series(a: &Algebra, i0: &Subspace, i1: &Subspace, start: Subspace) -> Vec<Subspace> {
    let mut out = vec![start];
    loop {
        let next = prop1(a, i0, i1, out.last().expect("nonempty"));
        if next == *out.last().expect("nonempty") {
            break;
        }
        out.push(next);
    }
    out
}

/// Computes every chain entry from the primitive operations and compares
/// it with its description; never fails on disagreement.
pub fn compute_chain(a: &Algebra) -> MegaidealChain {
    let g = Subspace::full(a);
    let g1 = derived(a, &g);
    let g2 = derived(a, &g1);
    let g3 = center(a, &g2);
    let zg1 = center(a, &g1);
    let z1 = zg1.intersection(&g3);
    let m1 = centralizer(a, &g, &g2);
    let m1p = derived(a, &m1);
    let m2 = prop1(a, &g, &g, &m1p);
    let cg1m2 = centralizer(a, &g1, &m2);
    let m3 = centralizer(a, &g, &m2);
    let z_series = iterate_series(a, &g3, &g1, z1.clone());
    let x_series = iterate_series(a, &cg1m2, &cg1m2, g3.clone());
    let check_degree = a.n().saturating_sub(2);
    let m4 = x_series.get(1).cloned().unwrap_or_else(|| g3.clone());
    let computed = vec![
        z1.clone(),
        z_series.get(1).cloned().unwrap_or_else(|| z1.clone()),
        m1p.clone(),
        m4.clone(),
        x_series.get(2).cloned().unwrap_or_else(|| m4.clone()),
        x_series.get(3).cloned().unwrap_or_else(|| m4.clone()),
        centralizer(a, &g, &m1),
        cg1m2.clone(),
        centralizer(a, &m3, &z1),
        m2.clone(),
        // Brackets with Z(t^M) leave the truncated g''', so i1 is cut back
        // to the degrees the comparison covers.
        prop1(a, &g, &m4.sum(&m1p).restrict_degree(a, check_degree), &g3),
    ];
    let entries = analytic_entries(a)
        .into_iter()
        .zip(computed)
        .map(|((label, analytic), computed)| ChainEntry {
            label: label.to_string(),
            low_degree_match: computed.restrict_degree(a, check_degree) == analytic.restrict_degree(a, check_degree),
            full_match: computed == analytic,
            computed,
            analytic,
        })
        .collect();
    MegaidealChain { algebra: a.clone(), check_degree, entries, z_series, x_series }
}

/// [`compute_chain`] that fails on the first entry disagreeing with its
/// description on coordinates of degree at most `N − 2`.
pub fn megaideal_chain(a: &Algebra) -> Result<MegaidealChain> {
    if a.n() < 4 {
        return Err(invalid(format!("megaideal chain needs truncation degree N ≥ 4 (got {})", a.n())));
    }
    let chain = compute_chain(a);
    if let Some(bad) = chain.entries.iter().find(|e| !e.low_degree_match) {
        return Err(Error::ChainMismatch {
            label: bad.label.clone(),
            detail: format!(
                "computed [{}] vs expected [{}]",
                bad.computed.describe(a).join(", "),
                bad.analytic.describe(a).join(", ")
            ),
        });
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::poly::q_frac;

    #[test]
    fn chain_at_degree_four() {
        let a = Algebra::new(4, q_frac(2, 7)).unwrap();
        let chain = megaideal_chain(&a).unwrap();
        assert_eq!(chain.entries.len(), 11);
        let dims: Vec<usize> = chain.entries.iter().map(|e| e.computed.dim()).collect();
        assert_eq!(dims[2], 1);
        assert_eq!(dims[9], 2);
        assert_eq!(dims[3], 2 + a.m() + 1);
        for (n, s) in chain.z_series.iter().enumerate() {
            assert_eq!(*s, Subspace::span(&a, &zs(&a, n)));
        }
    }

    #[test]
    fn chain_rejects_small_truncation() {
        let a = Algebra::new(3, q_frac(2, 7)).unwrap();
        assert!(megaideal_chain(&a).is_err());
    }
}
