//! Number-state matrix elements of a real displacement operator,
//! `⟨m|D(β)|n⟩`.
//!
//! For `m ≥ n` the element is `√(n!/m!) β^(m−n) e^(−β²/2) L_n^(m−n)(β²)`; the
//! other triangle follows from `⟨m|D(β)|n⟩ = (−1)^(m−n) ⟨n|D(β)|m⟩`. The
//! Laguerre factor is generated by a normalized three-term recurrence with
//! the common scale kept in the log domain.

use crate::{Error, Result};

const RESCALE: f64 = 1e150;

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

// Lower-triangle elements ⟨n + k|D(β)|n⟩ for n = 0..len, with β ≥ 0.
fn diagonal_run(k: usize, beta: f64, len: usize) -> Result<Vec<f64>> {
    let x = beta * beta;
    let kf = k as f64;
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Ok(out);
    }
    if beta == 0.0 {
        out.resize(len, if k == 0 { 1.0 } else { 0.0 });
        return Ok(out);
    }
    let prefix = kf * beta.ln() - 0.5 * ln_factorial(k) - 0.5 * x;
    let mut log_scale = 0.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for i in 0..len {
        let ln_mag = prefix + log_scale;
        if ln_mag > 700.0 {
            return Err(Error::OverlapOverflow { row: i + k, col: i, beta });
        }
        out.push(cur * ln_mag.exp());
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + kf - x) * cur - (fi * (fi + kf)).sqrt() * prev)
            / ((fi + 1.0) * (fi + 1.0 + kf)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
        if !cur.is_finite() {
            return Err(Error::OverlapOverflow { row: i + 1 + k, col: i + 1, beta });
        }
    }
    Ok(out)
}

/// `⟨n_row|D(β)|n_col⟩` for real `β`.
pub fn displaced_fock_overlap(n_row: usize, n_col: usize, beta: f64) -> Result<f64> {
    let (hi, lo) = if n_row >= n_col { (n_row, n_col) } else { (n_col, n_row) };
    let run = diagonal_run(hi - lo, beta.abs(), lo + 1)?;
    let mut v = run[lo];
    // D(−β) = P D(β) P with P the number parity; the upper triangle adds (−1)^(m−n).
    let flips = usize::from(beta < 0.0) + usize::from(n_row < n_col);
    if flips == 1 && (hi - lo) % 2 == 1 {
        v = -v;
    }
    Ok(v)
}

/// Dense `rows × cols` matrix of `⟨m|D(β)|n⟩`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTable {
    pub rows: usize,
    pub cols: usize,
    pub beta: f64,
    data: Vec<f64>,
}

impl OverlapTable {
    pub fn new(rows: usize, cols: usize, beta: f64) -> Result<Self> {
        let mut data = vec![0.0; rows * cols];
        let b = beta.abs();
        for k in 0..rows.max(cols) {
            // Lower triangle: (n + k, n).
            let len_lo = rows.saturating_sub(k).min(cols);
            // Upper triangle: (n, n + k).
            let len_up = if k == 0 { 0 } else { cols.saturating_sub(k).min(rows) };
            let run = diagonal_run(k, b, len_lo.max(len_up))?;
            let odd = k % 2 == 1;
            for n in 0..len_lo {
                let v = if odd && beta < 0.0 { -run[n] } else { run[n] };
                data[(n + k) * cols + n] = v;
            }
            for n in 0..len_up {
                let v = if odd && beta >= 0.0 { -run[n] } else { run[n] };
                data[n * cols + n + k] = v;
            }
        }
        Ok(Self { rows, cols, beta, data })
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.data[m * self.cols + n]
    }

    /// `1 − Σ_n ⟨m|D|n⟩²` over the stored columns.
    pub fn row_residual(&self, m: usize) -> f64 {
        let row = &self.data[m * self.cols..(m + 1) * self.cols];
        1.0 - row.iter().map(|v| v * v).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn direct(m: usize, n: usize, beta: f64) -> f64 {
        // Explicit Laguerre sum, fine for small arguments.
        let (hi, lo) = if m >= n { (m, n) } else { (n, m) };
        let k = hi - lo;
        let x = beta * beta;
        let fact = |i: usize| (1..=i).map(|v| v as f64).product::<f64>();
        let mut lag = 0.0;
        for i in 0..=lo {
            let binom = fact(lo + k) / (fact(lo - i) * fact(k + i));
            lag += binom * (-x).powi(i as i32) / fact(i);
        }
        let sign_beta = if m >= n { beta } else { -beta };
        (fact(lo) / fact(hi)).sqrt() * sign_beta.powi(k as i32) * (-x / 2.0).exp() * lag
    }

    #[test]
    fn identity_at_zero() {
        for m in 0..6 {
            for n in 0..6 {
                let v = displaced_fock_overlap(m, n, 0.0).unwrap();
                assert_eq!(v, if m == n { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn vacuum_element() {
        for beta in [-1.3, 0.2, 1.0, 2.0] {
            let v = displaced_fock_overlap(0, 0, beta).unwrap();
            assert!((v - (-beta * beta / 2.0f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_explicit_sum() {
        for beta in [-1.7, -0.3, 0.45, 1.2, 2.0] {
            for m in 0..12 {
                for n in 0..12 {
                    let a = displaced_fock_overlap(m, n, beta).unwrap();
                    let b = direct(m, n, beta);
                    assert!((a - b).abs() < 1e-12, "m={m} n={n} beta={beta}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn table_matches_pointwise() {
        for beta in [-0.8, 0.63] {
            let t = OverlapTable::new(9, 13, beta).unwrap();
            for m in 0..9 {
                for n in 0..13 {
                    assert!((t.get(m, n) - displaced_fock_overlap(m, n, beta).unwrap()).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn large_indices_stay_finite() {
        let t = OverlapTable::new(600, 600, 2.0).unwrap();
        assert!(t.row_residual(300).abs() < 1e-10);
        assert!(displaced_fock_overlap(599, 0, 2.0).unwrap().abs() < 1e-100);
    }

    proptest! {
        #[test]
        fn orthogonal_rows(beta in -2.0f64..2.0, m in 0usize..60, n in 0usize..60) {
            let cols = 60 + 40 + (20.0 * beta.abs() * 8.0) as usize;
            let t = OverlapTable::new(60, cols, beta).unwrap();
            let dot: f64 = (0..cols).map(|c| t.get(m, c) * t.get(n, c)).sum();
            let expected = if m == n { 1.0 } else { 0.0 };
            prop_assert!((dot - expected).abs() < 1e-10, "dot = {}", dot);
        }
    }
}
