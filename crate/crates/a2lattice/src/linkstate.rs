//! Planar link states on the periodic strip.
//!
//! A link state assigns to each of the `N` nodes on a horizontal row one of
//! four roles: vacant, defect (a through-line), or one endpoint of an arc
//! (opening or closing when the row is read rightward with periodic wrap).
//! Arcs connect nodes pairwise without crossings; a state is admissible when
//! no defect sits strictly inside the rightward interval spanned by an arc.
//! The states with fixed numbers of defects `d` and vacancies `v` span the
//! standard module of the sector, of dimension `C(N, v) * C(N - v, a)` with
//! `a = (N - d - v)/2` arcs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::Sector;

/// Role of a single node in a link state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    /// Unoccupied node.
    Vacant,
    /// Through-line reaching away from the row.
    Defect,
    /// Arc endpoint whose partner lies rightward (cyclically).
    Open,
    /// Arc endpoint whose partner lies leftward (cyclically).
    Close,
}

impl Role {
    /// Single-character display form: `.`, `d`, `(`, `)`.
    pub fn to_char(self) -> char {
        match self {
            Role::Vacant => '.',
            Role::Defect => 'd',
            Role::Open => '(',
            Role::Close => ')',
        }
    }

    /// Inverse of [`Role::to_char`].
    pub fn from_char(c: char) -> Option<Role> {
        match c {
            '.' => Some(Role::Vacant),
            'd' => Some(Role::Defect),
            '(' => Some(Role::Open),
            ')' => Some(Role::Close),
            _ => None,
        }
    }

    /// Whether the node carries a loop segment.
    pub fn occupied(self) -> bool {
        self != Role::Vacant
    }
}

/// A link state: the sequence of roles along the row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkState(pub Vec<Role>);

impl LinkState {
    /// Parses a role string such as `"(.d)"`.
    pub fn parse(s: &str) -> Option<LinkState> {
        s.chars().map(Role::from_char).collect::<Option<_>>().map(LinkState)
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the zero-node state.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The cyclic non-crossing matching of the arc endpoints, as sorted
    /// `(open, close)` index pairs, or `None` if the state is inadmissible
    /// (unbalanced endpoints, crossings, or a defect strictly inside the
    /// rightward open-to-close interval of some arc).
    pub fn arcs(&self) -> Option<Vec<(usize, usize)>> {
        let n = self.0.len();
        let mut unmatched: Vec<usize> = (0..n)
            .filter(|&i| matches!(self.0[i], Role::Open | Role::Close))
            .collect();
        let mut arcs = Vec::new();
        let mut guard = 0;
        while !unmatched.is_empty() {
            guard += 1;
            if guard > 2 * n + 5 {
                return None;
            }
            let m = unmatched.len();
            let mut matched = None;
            for idx in 0..m {
                let (i, j) = (unmatched[idx], unmatched[(idx + 1) % m]);
                if self.0[i] == Role::Open && self.0[j] == Role::Close {
                    matched = Some((i, j));
                    break;
                }
            }
            let (i, j) = matched?;
            arcs.push((i, j));
            unmatched.retain(|&x| x != i && x != j);
        }
        // No defect strictly inside any rightward open -> close interval.
        for &(o, c) in &arcs {
            let mut k = (o + 1) % n;
            while k != c {
                if self.0[k] == Role::Defect {
                    return None;
                }
                k = (k + 1) % n;
            }
        }
        arcs.sort_unstable();
        Some(arcs)
    }

    /// The sector this state belongs to.
    pub fn sector(&self) -> Sector {
        let d = self.0.iter().filter(|&&r| r == Role::Defect).count();
        let v = self.0.iter().filter(|&&r| r == Role::Vacant).count();
        Sector::new(self.0.len(), d, v)
    }
}

impl fmt::Display for LinkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.0 {
            write!(f, "{}", r.to_char())?;
        }
        Ok(())
    }
}

/// All admissible link states of a sector, sorted.
///
/// ```
/// use a2lattice::linkstate::basis;
/// use a2lattice::scalars::Sector;
///
/// // Four nodes, no defects, no vacancies: every placement of two arc
/// // openings among the four nodes admits a unique non-crossing matching
/// // on the circle, including the wrapping patterns.
/// let states = basis(Sector::new(4, 0, 0));
/// let mut shown: Vec<String> = states.iter().map(|s| s.to_string()).collect();
/// shown.sort();
/// assert_eq!(shown, vec!["(())", "()()", "())(", ")(()", ")()(", "))(("]);
/// ```
pub fn basis(sector: Sector) -> Vec<LinkState> {
    let n = sector.n_cols;
    let mut out = Vec::new();
    let mut roles = vec![Role::Vacant; n];
    fill(&mut roles, 0, sector, &mut out);
    out.sort_unstable();
    out
}

fn fill(roles: &mut Vec<Role>, pos: usize, sector: Sector, out: &mut Vec<LinkState>) {
    if pos == roles.len() {
        let st = LinkState(roles.clone());
        let d = roles.iter().filter(|&&r| r == Role::Defect).count();
        let v = roles.iter().filter(|&&r| r == Role::Vacant).count();
        if d == sector.defects && v == sector.vacancies && st.arcs().is_some() {
            out.push(st);
        }
        return;
    }
    for r in [Role::Vacant, Role::Defect, Role::Open, Role::Close] {
        roles[pos] = r;
        fill(roles, pos + 1, sector, out);
    }
}

/// Dimension formula `C(N, v) * C(N - v, a)` for the standard module.
pub fn dimension(sector: Sector) -> usize {
    binom(sector.n_cols, sector.vacancies)
        * binom(sector.n_cols - sector.vacancies, sector.arcs())
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roles_round_trip() {
        for c in ['.', 'd', '(', ')'] {
            assert_eq!(Role::from_char(c).unwrap().to_char(), c);
        }
        assert!(Role::from_char('x').is_none());
    }

    #[test]
    fn wrapping_arcs_are_admissible() {
        // A close before its open wraps around the seam.
        let st = LinkState::parse(")(").unwrap();
        assert_eq!(st.arcs().unwrap(), vec![(1, 0)]);
    }

    #[test]
    fn defect_inside_arc_is_rejected() {
        assert!(LinkState::parse("(d)").unwrap().arcs().is_none());
        // Defect outside the rightward span is fine.
        assert!(LinkState::parse("()d").unwrap().arcs().is_some());
        // Wrapping arc spans rightward from index 2 through the seam to 0:
        // a defect at index 1 is outside that interval.
        assert!(LinkState::parse(")d(").unwrap().arcs().is_some());
    }

    #[test]
    fn basis_matches_dimension_formula() {
        for n in 1..=8 {
            for sector in Sector::all(n) {
                let states = basis(sector);
                assert_eq!(
                    states.len(),
                    dimension(sector),
                    "sector {sector:?} enumerated {} states",
                    states.len()
                );
            }
        }
    }

    #[test]
    fn known_small_counts() {
        // Frozen from independent combinatorics: two nodes.
        assert_eq!(basis(Sector::new(2, 0, 0)).len(), 2); // "()" and ")("
        assert_eq!(basis(Sector::new(2, 2, 0)).len(), 1);
        assert_eq!(basis(Sector::new(2, 1, 1)).len(), 2);
        // Three nodes, one defect, one arc.
        assert_eq!(basis(Sector::new(3, 1, 0)).len(), 3);
        // Six nodes, no defects or vacancies: C(6,3) = 20.
        assert_eq!(basis(Sector::new(6, 0, 0)).len(), 20);
    }
}
