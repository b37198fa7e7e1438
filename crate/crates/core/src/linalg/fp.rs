//! Dense Gaussian elimination over `F_p`.

use crate::scalar::inv_mod;

/// Rank of a dense row-major matrix with entries in `[0, p)`.
///
/// Non-pivot rows accumulate unreduced updates in `u64` whenever the bound
/// `(rank + 1) * (p - 1)^2 < 2^64` makes that safe, so the inner loop is a
/// plain multiply-add; otherwise every update is reduced immediately.
pub fn rank_mod_p(entries: Vec<u32>, nrows: usize, ncols: usize, p: u32) -> usize {
    assert_eq!(entries.len(), nrows * ncols);
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let pm = p as u64;
    let max_updates = nrows.min(ncols) as u128 + 1;
    let lazy = max_updates * ((pm - 1) as u128).pow(2) + pm as u128 <= u64::MAX as u128;
    let mut a: Vec<u64> = entries.into_iter().map(u64::from).collect();
    let full = nrows.min(ncols);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == full {
            break;
        }
        let mut pivot = None;
        for r in rank..nrows {
            let e = &mut a[r * ncols + col];
            *e %= pm;
            if *e != 0 {
                pivot = Some(r);
                break;
            }
        }
        let Some(pr) = pivot else { continue };
        if pr != rank {
            for c in col..ncols {
                a.swap(pr * ncols + c, rank * ncols + c);
            }
        }
        let (head, tail) = a.split_at_mut((rank + 1) * ncols);
        let prow = &mut head[rank * ncols + col..];
        let inv = inv_mod((prow[0] % pm) as u32, p) as u64;
        for x in prow.iter_mut() {
            *x = (*x % pm) * inv % pm;
        }
        let prow = &*prow;
        for r in 0..(nrows - rank - 1) {
            let row = &mut tail[r * ncols + col..(r + 1) * ncols];
            let e = row[0] % pm;
            if e == 0 {
                continue;
            }
            let f = pm - e;
            if lazy {
                for (x, &y) in row.iter_mut().zip(prow) {
                    *x += f * y;
                }
            } else {
                for (x, &y) in row.iter_mut().zip(prow) {
                    *x = (*x % pm + f * y % pm) % pm;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_mod_p(vec![1, 2, 2, 4], 2, 2, 7), 1);
        assert_eq!(rank_mod_p(vec![1, 1, 1, 4], 2, 2, 3), 1);
        assert_eq!(rank_mod_p(vec![1, 1, 1, 4], 2, 2, 5), 2);
        assert_eq!(rank_mod_p(vec![0; 6], 2, 3, 10007), 0);
        let p = 2147483647u32;
        assert_eq!(rank_mod_p(vec![p - 1, 1, 1, p - 1], 2, 2, p), 1);
    }
}
