use num_integer::Integer as _;

use crate::GCParams;

pub const GRID_P: [i64; 3] = [2, 3, 5];
pub const GRID_Q: [i64; 8] = [1, -1, 2, -2, 3, -3, 7, -7];
pub const GRID_A: [usize; 3] = [0, 1, 2];

/// All valid `(p, q, a)` from the given lists; pairs with `gcd(p, q) != 1` are
/// skipped. Ordered by `p`, then `q`, then `a`, following the input order.
pub fn param_grid(ps: &[i64], qs: &[i64], offsets: &[usize]) -> Vec<GCParams> {
    let mut out = Vec::new();
    for &p in ps {
        for &q in qs {
            if q == 0 || p.gcd(&q) != 1 || p < 2 {
                continue;
            }
            for &a in offsets {
                out.push(GCParams { p, q, a });
            }
        }
    }
    out
}

/// `p in {2,3,5}`, `q in {+-1, +-2, +-3, +-7}` coprime to `p`, `a in {0,1,2}`.
pub fn acceptance_grid() -> Vec<GCParams> {
    param_grid(&GRID_P, &GRID_Q, &GRID_A)
}
