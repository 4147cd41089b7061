//! Smith normal form of small integer matrices.
//!
//! Used to decide whether a set of integer vectors generates the full lattice
//! `Z^d`: the generated sublattice equals `Z^d` exactly when every invariant
//! factor is 1. Everything is exact integer arithmetic; entries are widened
//! to `i128` so the intermediate growth of the reduction cannot overflow for
//! the matrix sizes that occur here.

/// Invariant factors of an integer matrix with `cols` columns.
///
/// Returns exactly `cols` entries, padded with zeros when the rank is below
/// `cols`. Factors are nonnegative and each divides the next nonzero one.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nr = m.len();
    let nc = cols;
    debug_assert!(m.iter().all(|r| r.len() == nc));

    let mut factors = vec![0i64; nc];
    let rank_bound = nr.min(nc);

    for k in 0..rank_bound {
        // Find the nonzero entry of smallest magnitude in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }

        loop {
            let p = m[k][k];
            // Clear column k.
            let mut dirty = false;
            for i in k + 1..nr {
                let q = div_round(m[i][k], p);
                if q != 0 {
                    for j in k..nc {
                        m[i][j] -= q * m[k][j];
                    }
                }
                if m[i][k] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder smaller than the pivot exists; promote it.
                let i = (k + 1..nr).find(|&i| m[i][k] != 0).unwrap();
                m.swap(k, i);
                continue;
            }
            // Clear row k.
            let mut dirty = false;
            for j in k + 1..nc {
                let q = div_round(m[k][j], p);
                if q != 0 {
                    for row in m.iter_mut().skip(k) {
                        row[j] -= q * row[k];
                    }
                }
                if m[k][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                let j = (k + 1..nc).find(|&j| m[k][j] != 0).unwrap();
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
                continue;
            }
            // Divisibility: the pivot must divide the trailing block.
            let mut fixed = true;
            'scan: for i in k + 1..nr {
                for j in k + 1..nc {
                    if m[i][j] % p != 0 {
                        // Fold the offending row into row k and restart.
                        for col in k..nc {
                            m[k][col] += m[i][col];
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        factors[k] = i64::try_from(m[k][k].abs()).expect("invariant factor fits in i64");
    }
    factors
}

/// Round-to-nearest integer division, so remainders satisfy |r| <= |p|/2.
fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[&[i64]], cols: usize) -> Vec<i64> {
        invariant_factors(
            &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            cols,
        )
    }

    #[test]
    fn empty_generator_set() {
        assert_eq!(invariant_factors(&[], 2), vec![0, 0]);
    }

    #[test]
    fn unit_vectors_span() {
        assert_eq!(snf(&[&[1, 0], &[0, 1]], 2), vec![1, 1]);
    }

    #[test]
    fn single_doubled_vector() {
        // Index (2,0) alone generates a proper sublattice.
        assert_eq!(snf(&[&[2, 0]], 2), vec![2, 0]);
    }

    #[test]
    fn diagonal_2_3_has_factors_1_6() {
        // gcd of entries is 1, determinant is 6.
        assert_eq!(snf(&[&[2, 0], &[0, 3]], 2), vec![1, 6]);
    }

    #[test]
    fn common_factor_2() {
        // [[2,4],[6,8]]: gcd 2, |det| 8 -> factors (2, 4).
        assert_eq!(snf(&[&[2, 4], &[6, 8]], 2), vec![2, 4]);
    }

    #[test]
    fn negative_entries() {
        assert_eq!(snf(&[&[-1, 0], &[7, -3]], 2), vec![1, 3]);
    }

    #[test]
    fn redundant_generators() {
        assert_eq!(snf(&[&[1, 1], &[2, 2], &[1, -1]], 2), vec![1, 2]);
    }
}
