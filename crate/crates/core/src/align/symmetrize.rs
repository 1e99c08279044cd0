use std::collections::BTreeSet;

use super::{Alignment, Symmetrization};

const NEIGHBORS: [(isize, isize); 8] = [
    (-1, 0),
    (0, -1),
    (1, 0),
    (0, 1),
    (-1, -1),
    (-1, 1),
    (1, -1),
    (1, 1),
];

/// Combines a source→target and a target→source alignment (both given in
/// `(src, tgt)` coordinates).
pub fn symmetrize(fwd: &Alignment, rev: &Alignment, heuristic: Symmetrization) -> Alignment {
    match heuristic {
        Symmetrization::Intersection => fwd.intersection(rev),
        Symmetrization::Union => fwd.union(rev),
        Symmetrization::GrowDiagFinalAnd => grow_diag_final_and(fwd, rev),
    }
}

fn grow_diag_final_and(fwd: &Alignment, rev: &Alignment) -> Alignment {
    let union = fwd.union(rev);
    let mut links: BTreeSet<(usize, usize)> = fwd.intersection(rev).links;
    let (src_len, tgt_len) = union
        .links
        .iter()
        .fold((0, 0), |(a, b), &(i, j)| (a.max(i + 1), b.max(j + 1)));
    let mut src_aligned = vec![false; src_len];
    let mut tgt_aligned = vec![false; tgt_len];
    for &(i, j) in &links {
        src_aligned[i] = true;
        tgt_aligned[j] = true;
    }

    // grow-diag: repeat row-major sweeps until a sweep adds nothing
    loop {
        let mut added = false;
        for i in 0..src_len {
            for j in 0..tgt_len {
                if !links.contains(&(i, j)) {
                    continue;
                }
                for (di, dj) in NEIGHBORS {
                    let (Some(ni), Some(nj)) = (i.checked_add_signed(di), j.checked_add_signed(dj)) else {
                        continue;
                    };
                    if ni >= src_len || nj >= tgt_len {
                        continue;
                    }
                    if (!src_aligned[ni] || !tgt_aligned[nj])
                        && union.contains(ni, nj)
                        && links.insert((ni, nj))
                    {
                        src_aligned[ni] = true;
                        tgt_aligned[nj] = true;
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    // final-and, forward direction then reverse
    for directional in [fwd, rev] {
        for i in 0..src_len {
            for j in 0..tgt_len {
                if !src_aligned[i] && !tgt_aligned[j] && directional.contains(i, j) {
                    links.insert((i, j));
                    src_aligned[i] = true;
                    tgt_aligned[j] = true;
                }
            }
        }
    }
    Alignment { links }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let fwd = Alignment::new([(0, 0), (1, 1)]);
        let rev = Alignment::new([(0, 0)]);
        assert_eq!(
            symmetrize(&fwd, &rev, Symmetrization::Intersection),
            Alignment::new([(0, 0)])
        );
        assert_eq!(
            symmetrize(&fwd, &rev, Symmetrization::Union),
            Alignment::new([(0, 0), (1, 1)])
        );
    }

    #[test]
    fn gdfa_grows_diagonal_neighbor() {
        let fwd = Alignment::new([(0, 0), (1, 1)]);
        let rev = Alignment::new([(0, 0)]);
        // (1,1) is a diagonal neighbor of (0,0) with both words unaligned
        assert_eq!(
            symmetrize(&fwd, &rev, Symmetrization::GrowDiagFinalAnd),
            Alignment::new([(0, 0), (1, 1)])
        );
    }

    #[test]
    fn gdfa_final_and_needs_both_unaligned() {
        // (2,0) is in fwd only, not adjacent to the intersection; its target
        // word 0 is already aligned so final-and skips it.
        let fwd = Alignment::new([(0, 0), (2, 0), (3, 3)]);
        let rev = Alignment::new([(0, 0)]);
        let got = symmetrize(&fwd, &rev, Symmetrization::GrowDiagFinalAnd);
        assert_eq!(got, Alignment::new([(0, 0), (3, 3)]));
    }

    #[test]
    fn empty_inputs() {
        let e = Alignment::default();
        assert!(symmetrize(&e, &e, Symmetrization::GrowDiagFinalAnd).is_empty());
    }
}
