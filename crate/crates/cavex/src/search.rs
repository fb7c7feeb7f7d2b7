//! One-dimensional maximization: coarse log-spaced grid scan followed by
//! golden-section refinement in log coordinates.

use crate::scalar::{as_f64, real, Real};
use thiserror::Error;

/// Relative dip below the smaller of two grid peaks that counts as a real
/// separation rather than integration noise.
const SEPARATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct Maximum<S> {
    pub argmax: S,
    pub value: S,
    pub evaluations: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError<E> {
    #[error("objective has {} separated local maxima on the scan grid", candidates.len())]
    NotUnimodal {
        /// (argument, value) of every separated grid maximum.
        candidates: Vec<(f64, f64)>,
    },
    #[error("maximum sits on the {} end of the bracket", if *at_lower { "lower" } else { "upper" })]
    MaximumAtBoundary { at_lower: bool },
    #[error("bracket must satisfy 0 < lo < hi")]
    InvalidBracket,
    #[error(transparent)]
    Eval(E),
}

/// Maximizes `f` over `[lo, hi]` (log-spaced scan of `grid` points, then
/// golden-section refinement to relative position tolerance `rel_tol`).
///
/// The grid scan doubles as the unimodality check: separated local maxima
/// are surfaced as `NotUnimodal`, never silently resolved.
pub fn maximize_log_bracket<S: Real, E, F>(
    mut f: F,
    lo: S,
    hi: S,
    grid: usize,
    rel_tol: f64,
) -> Result<Maximum<S>, SearchError<E>>
where
    F: FnMut(S) -> Result<S, E>,
{
    if !(lo > S::zero()) || !(hi > lo) || grid < 3 {
        return Err(SearchError::InvalidBracket);
    }

    let ln_lo = lo.ln();
    let ln_hi = hi.ln();
    let step = (ln_hi - ln_lo) / real::<S>((grid - 1) as f64);

    let mut xs = Vec::with_capacity(grid);
    let mut ws = Vec::with_capacity(grid);
    let mut evaluations = 0;
    for i in 0..grid {
        let x = (ln_lo + step * real::<S>(i as f64)).exp();
        let w = f(x).map_err(SearchError::Eval)?;
        evaluations += 1;
        xs.push(x);
        ws.push(w);
    }

    // leading edge of a plateau counts as the peak so exact ties on
    // symmetric grids do not hide an interior maximum
    let peaks: Vec<usize> = (1..grid - 1)
        .filter(|&i| ws[i] > ws[i - 1] && ws[i] >= ws[i + 1])
        .collect();

    // two peaks are separated when the valley between them dips visibly
    // below both
    let w_max = ws.iter().cloned().fold(S::neg_infinity(), S::max);
    let mut separated: Vec<usize> = Vec::new();
    for &p in &peaks {
        if let Some(&prev) = separated.last() {
            let valley = ws[prev..=p].iter().cloned().fold(S::infinity(), S::min);
            let smaller = ws[prev].min(ws[p]);
            if valley < smaller - real::<S>(SEPARATION_TOL) * w_max.abs() {
                separated.push(p);
            } else if ws[p] > ws[prev] {
                *separated.last_mut().expect("nonempty") = p;
            }
        } else {
            separated.push(p);
        }
    }

    if separated.len() > 1 {
        return Err(SearchError::NotUnimodal {
            candidates: separated
                .iter()
                .map(|&i| (as_f64(xs[i]), as_f64(ws[i])))
                .collect(),
        });
    }

    let best = match separated.first() {
        Some(&i) => i,
        None => {
            // no interior grid peak: the maximum leans on a bracket end
            let argmax = ws
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite objective"))
                .map(|(i, _)| i)
                .expect("nonempty grid");
            return Err(SearchError::MaximumAtBoundary {
                at_lower: argmax == 0,
            });
        }
    };

    // golden-section refinement on the log axis inside the bracketing cells
    let inv_phi = real::<S>(0.618_033_988_749_894_9);
    let mut a = xs[best - 1].ln();
    let mut b = xs[best + 1].ln();
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1.exp()).map_err(SearchError::Eval)?;
    let mut f2 = f(x2.exp()).map_err(SearchError::Eval)?;
    evaluations += 2;

    let tol = real::<S>(rel_tol.max(f64::EPSILON));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2.exp()).map_err(SearchError::Eval)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1.exp()).map_err(SearchError::Eval)?;
        }
        evaluations += 1;
    }

    let (arg, val) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    Ok(Maximum {
        argmax: arg.exp(),
        value: val,
        evaluations,
    })
}
