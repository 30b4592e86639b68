//! Strand-bundle projectors and directly fused transfer matrices.
//!
//! A fused transfer operator of type `(m, n)` stacks `m` rows of the first
//! face family at arguments `u, u + lambda, ..` and `n` rows of the second
//! family above them, and threads the periodic seam through a projector cell
//! acting on the bundle of `m + n` horizontal strands.  The projectors are
//! built from two primitive "bubble" elements by a recursion on the strand
//! count; they are idempotent and kill the bubbles.
//!
//! The directly fused matrices agree with the operators generated by the
//! fusion-hierarchy recursion of [`crate::hierarchy`]; that agreement is the
//! strongest internal consistency check in the crate, since the two
//! constructions share nothing but the elementary faces.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::faceops::{self, Cell, Term};
use crate::scalars::{BraidLabel, Params, Sector, C64};
use crate::transfer::Transfer;

/// Key identifying a bundle diagram: port occupancies and sorted bonds.
type BundleKey = (Vec<u8>, Vec<(usize, usize)>);

fn key_of(term: &Term) -> BundleKey {
    let mut bonds: Vec<(usize, usize)> = term
        .bonds
        .iter()
        .map(|&(a, b, _)| (a.min(b), a.max(b)))
        .collect();
    bonds.sort_unstable();
    (term.occ.clone(), bonds)
}

fn from_map(map: HashMap<BundleKey, C64>) -> Cell {
    map.into_iter()
        .filter(|(_, w)| w.norm() > 1e-13)
        .map(|((occ, bonds), w)| Term::new(occ, bonds, w))
        .collect()
}

/// Linear combination of bundle cells, merging identical diagrams.
pub fn lin(parts: &[(C64, &Cell)]) -> Cell {
    let mut map: HashMap<BundleKey, C64> = HashMap::new();
    for &(c, cell) in parts {
        for t in cell {
            *map.entry(key_of(t)).or_insert(C64::new(0.0, 0.0)) += c * t.weight;
        }
    }
    from_map(map)
}

/// Builds a bundle cell on `b` strands from terms on a subset of strands,
/// filling the remaining strands with the dashed identity (each either
/// carries a straight occupied line or is vacant).
///
/// Each special term is `(weight, occupied ports, bonds)` in the global
/// port numbering (left ports `0..b-1` bottom to top, right `b..2b-1`).
fn tensor(b: usize, special: &[usize], terms: &[(C64, Vec<usize>, Vec<(usize, usize)>)]) -> Cell {
    let rest: Vec<usize> = (0..b).filter(|i| !special.contains(i)).collect();
    let mut map: HashMap<BundleKey, C64> = HashMap::new();
    for (w, occ_ports, bonds) in terms {
        for mask in 0..(1u32 << rest.len()) {
            let mut occ = vec![0u8; 2 * b];
            for &p in occ_ports {
                occ[p] = 1;
            }
            let mut bs: Vec<(usize, usize)> = bonds.clone();
            for (bit, &i) in rest.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    occ[i] = 1;
                    occ[b + i] = 1;
                    bs.push((i, b + i));
                }
            }
            let term = Term::new(occ, bs, *w);
            *map.entry(key_of(&term)).or_insert(C64::new(0.0, 0.0)) += *w;
        }
    }
    from_map(map)
}

/// The identity bundle cell on `b` strands.
pub fn identity_bundle(b: usize) -> Cell {
    tensor(b, &[], &[(C64::new(1.0, 0.0), vec![], vec![])])
}

/// The two-strand bubble killed by the symmetric projector, on strands
/// `j, j+1` of a `b`-strand bundle.
///
/// Five diagrams: four single lines connecting either input branch to
/// either output branch, and the cap/cup pair.  The input branches enter
/// with equal weight; the output branch leaving on the lower strand carries
/// `q`, the upper one `1/q`.
pub fn bubble(params: &Params, b: usize, j: usize) -> Cell {
    let q = params.q();
    let one = C64::new(1.0, 0.0);
    let (l1, l2, r1, r2) = (j, j + 1, b + j, b + j + 1);
    tensor(
        b,
        &[j, j + 1],
        &[
            (q, vec![l1, r1], vec![(l1, r1)]),
            (q, vec![l2, r1], vec![(l2, r1)]),
            (q.inv(), vec![l1, r2], vec![(l1, r2)]),
            (q.inv(), vec![l2, r2], vec![(l2, r2)]),
            (one, vec![l1, l2, r1, r2], vec![(l1, l2), (r1, r2)]),
        ],
    )
}

/// The mixed-bubble element on strands `j, j+1`: a plain cap on the input
/// side tensored with a weighted cup on the output side (occupied `q`,
/// vacant `1/q^2`).
pub fn mixed_bubble(params: &Params, b: usize, j: usize) -> Cell {
    let q = params.q();
    let (l1, l2, r1, r2) = (j, j + 1, b + j, b + j + 1);
    let mut terms = Vec::new();
    for (lo, lw) in [(1u8, C64::new(1.0, 0.0)), (0, C64::new(1.0, 0.0))] {
        for (ro, rw) in [(1u8, q), (0, q.powi(-2))] {
            let mut occ = Vec::new();
            let mut bonds = Vec::new();
            if lo == 1 {
                occ.extend([l1, l2]);
                bonds.push((l1, l2));
            }
            if ro == 1 {
                occ.extend([r1, r2]);
                bonds.push((r1, r2));
            }
            terms.push((lw * rw, occ, bonds));
        }
    }
    tensor(b, &[j, j + 1], &terms)
}

/// Composes two bundle cells on `b` strands (output of `c1` into input of
/// `c2`), closing internal loops with weight `beta`.
pub fn compose(params: &Params, c1: &Cell, c2: &Cell, b: usize) -> Cell {
    let wires: Vec<_> = (0..b).map(|i| ((0, b + i), (1, i))).collect();
    let ext: Vec<(usize, usize)> = (0..b)
        .map(|i| (0, i))
        .chain((0..b).map(|i| (1, b + i)))
        .collect();
    let res = faceops::patch(
        &[c1.clone(), c2.clone()],
        &wires,
        &ext,
        params.beta(),
    );
    from_map(
        res.into_iter()
            .map(|((occ, pairing), w)| ((occ, pairing), w))
            .collect(),
    )
}

/// Embeds a `b_old`-strand cell into a `b_new`-strand bundle at strand
/// offset `off`, with dashed identities on the remaining strands.
pub fn embed(cell: &Cell, b_old: usize, b_new: usize, off: usize) -> Cell {
    let mp = |p: usize| {
        if p < b_old {
            p + off
        } else {
            b_new + (p - b_old) + off
        }
    };
    let rest: Vec<usize> = (0..b_new).filter(|&i| !(off..off + b_old).contains(&i)).collect();
    let mut map: HashMap<BundleKey, C64> = HashMap::new();
    for t in cell {
        let mut base_occ = vec![0u8; 2 * b_new];
        for p in 0..2 * b_old {
            if t.occ[p] == 1 {
                base_occ[mp(p)] = 1;
            }
        }
        let base_bonds: Vec<(usize, usize)> =
            t.bonds.iter().map(|&(a, b, _)| (mp(a), mp(b))).collect();
        for mask in 0..(1u32 << rest.len()) {
            let mut occ = base_occ.clone();
            let mut bonds = base_bonds.clone();
            for (bit, &i) in rest.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    occ[i] = 1;
                    occ[b_new + i] = 1;
                    bonds.push((i, b_new + i));
                }
            }
            let term = Term::new(occ, bonds, t.weight);
            *map.entry(key_of(&term)).or_insert(C64::new(0.0, 0.0)) += t.weight;
        }
    }
    from_map(map)
}

/// Largest weight difference between two bundle cells.
pub fn cell_diff(a: &Cell, b: &Cell) -> f64 {
    lin(&[(C64::new(1.0, 0.0), a), (C64::new(-1.0, 0.0), b)])
        .iter()
        .map(|t| t.weight.norm())
        .fold(0.0, f64::max)
}

/// Symmetric projector on `m` strands, by the bubble-subtraction recursion
/// `P_(m+1) = P_m - ([m]/[m+1]) P_m Y_(m, m+1) P_m` (with `P_m` extended by
/// an identity strand on top).
pub fn symmetric_projector(params: &Params, m: usize) -> Cell {
    assert!(m >= 1);
    let mut p = identity_bundle(1);
    for k in 1..m {
        let pk = embed(&p, k, k + 1, 0);
        let y = bubble(params, k + 1, k - 1);
        let mid = compose(params, &compose(params, &pk, &y, k + 1), &pk, k + 1);
        let one = C64::new(1.0, 0.0);
        let c = C64::new(-params.qnum(k as i64) / params.qnum(k as i64 + 1), 0.0);
        p = lin(&[(one, &pk), (c, &mid)]);
    }
    p
}

/// Projector for the fused operator of type `(m, n)`, on `m + n` strands
/// with the `m`-part at the bottom of the bundle.
///
/// For a pure type (`m = 0` or `n = 0`) this is the symmetric projector (in
/// the seam frame the second family uses the same cell).  For mixed types
/// the mixed-bubble subtraction is applied; only depth-one subtraction
/// (`min(m, n) <= 1`) is implemented, which covers every mixed type with a
/// single row of one family.
pub fn projector(params: &Params, m: usize, n: usize) -> Cell {
    let b = m + n;
    assert!(b >= 1);
    if m == 0 || n == 0 {
        return symmetric_projector(params, b);
    }
    assert!(
        m.min(n) == 1,
        "mixed projector implemented for min(m, n) <= 1 only"
    );
    let pp = if m >= n {
        embed(&symmetric_projector(params, m), m, b, 0)
    } else {
        embed(&symmetric_projector(params, n), n, b, m)
    };
    let x = mixed_bubble(params, b, m - 1);
    let d1 = compose(params, &compose(params, &pp, &x, b), &pp, b);
    let c = -params.qbinom(m as i64, 1) * params.qbinom(n as i64, 1)
        / params.qbinom(b as i64 + 1, 1);
    lin(&[(C64::new(1.0, 0.0), &pp), (C64::new(c, 0.0), &d1)])
}

/// Directly fused transfer matrix of type `(m, n)` at base argument `u`:
/// `m` rows of the first family at `u + k lambda` (k = 0..m-1), then `n`
/// rows of the second family continuing the argument ladder, threaded
/// through [`projector`] at the seam and normalised by
/// `prod_(k=0)^(m+n-2) s_k(u)^(-N)`.
pub fn fused_transfer(
    params: &Params,
    sector: Sector,
    m: usize,
    n: usize,
    u: C64,
) -> DMatrix<C64> {
    let engine = Transfer::new(params, sector);
    let b = m + n;
    assert!(b >= 1);
    let mut rows = Vec::new();
    for k in 0..b {
        let label = if k < m {
            BraidLabel::OneZero
        } else {
            BraidLabel::ZeroOne
        };
        let f = faceops::face(params, label, u + k as f64 * params.lambda);
        rows.push(vec![f; sector.n_cols]);
    }
    let proj = projector(params, m, n);
    let mut norm = C64::new(1.0, 0.0);
    for k in 0..b.saturating_sub(1) {
        norm *= params.s(k as i64, u).powu(sector.n_cols as u32);
    }
    engine.contract(&rows, Some(&proj)) / norm
}
