//! Bessel functions of the first kind, integer order, real argument.
//!
//! All orders `J_0 … J_N` come out of one Miller backward recurrence,
//! normalized with `J_0 + 2 Σ_k J_2k = 1`.

/// Values `J_0(x), …, J_{n_max}(x)`.
pub fn bessel_j_orders(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();

    // Start well above both the requested order and the turning point n ≈ x,
    // where J_n is already below double precision relative to J_0.
    let top = (n_max as f64).max(ax);
    let mut start = (top + 30.0 + (40.0 * top).sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let two_over_x = 2.0 / ax;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, arbitrary seed
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if k - 1 <= n_max {
            out[k - 1] = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for any integer `n`, via `J_{−n} = (−1)^n J_n`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_orders(x, m)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}
