//! The float element pass shared by vector checks and rule evaluation.
//!
//! Elements are tested in blocks that start at a single element and double
//! after every clean block, up to [`MAX_BLOCK`]. A block is tested without
//! branches so the compiler can vectorize it; only a failing block is
//! rescanned element by element to locate the first violation. A violation
//! at position `i` is therefore found after reading at most `2 * i + 2`
//! elements, and a violation at the first element after reading one.

use super::spec::Bounds;
use super::{integerish_is_ok, ScanProbe};

pub(crate) const MAX_BLOCK: usize = 256;

/// Bounds and integerish tests with the endpoints resolved up front.
#[derive(Clone, Copy)]
pub(crate) struct NumberTest {
    lo: f64,
    lo_closed: bool,
    hi: f64,
    hi_closed: bool,
    tolerance: Option<f64>,
}

impl NumberTest {
    pub(crate) fn new(bounds: Option<&Bounds>, tolerance: Option<f64>) -> Self {
        let b = bounds.copied();
        NumberTest {
            lo: b.and_then(|b| b.lower()).unwrap_or(f64::NEG_INFINITY),
            lo_closed: b.is_none_or(|b| b.lower_closed()),
            hi: b.and_then(|b| b.upper()).unwrap_or(f64::INFINITY),
            hi_closed: b.is_none_or(|b| b.upper_closed()),
            tolerance,
        }
    }

    /// Bounds only. False for NaN.
    #[inline(always)]
    fn in_bounds(&self, v: f64) -> bool {
        let lower = (v > self.lo) | (self.lo_closed & (v == self.lo));
        let upper = (v < self.hi) | (self.hi_closed & (v == self.hi));
        lower & upper
    }

    #[inline(always)]
    pub(crate) fn holds(&self, v: f64) -> bool {
        self.in_bounds(v) && self.tolerance.is_none_or(|t| integerish_is_ok(v, t))
    }
}

/// Tests every element of `xs`; NaN cells are missing.
#[derive(Clone, Copy)]
pub(crate) struct FloatScan {
    pub(crate) test: NumberTest,
    pub(crate) any_missing_ok: bool,
}

impl FloatScan {
    /// The number of missing elements, or the index of the first element
    /// that is missing when it must not be or fails the number test.
    pub(crate) fn run<P: ScanProbe>(&self, xs: &[f64], probe: &mut P) -> Result<usize, usize> {
        // integerish needs rounding, which does not vectorize
        let blocked = self.test.tolerance.is_none();
        let mut missing = 0;
        let mut i = 0;
        let mut block = 1;
        while i < xs.len() {
            if blocked && block > 1 {
                let end = (i + block).min(xs.len());
                for j in i..end {
                    probe.inspect(j);
                }
                missing += match self.block_missing(&xs[i..end]) {
                    Some(m) => m,
                    None => self.exact(&xs[i..end], i, probe)?,
                };
                i = end;
                block = (block * 2).min(MAX_BLOCK);
                continue;
            }
            probe.inspect(i);
            let v = xs[i];
            if v.is_nan() {
                if !self.any_missing_ok {
                    return Err(i);
                }
                missing += 1;
            } else if !self.test.holds(v) {
                return Err(i);
            }
            i += 1;
            block = 2;
        }
        Ok(missing)
    }

    /// Missing count of a block in which every element passes.
    #[inline(always)]
    fn block_missing(&self, xs: &[f64]) -> Option<usize> {
        if self.any_missing_ok {
            let (ok, missing) = xs.iter().fold((true, 0usize), |(ok, m), &v| {
                let nan = v.is_nan();
                (ok & (nan | self.test.in_bounds(v)), m + nan as usize)
            });
            ok.then_some(missing)
        } else {
            // NaN fails the bounds test on its own
            let ok = xs.iter().fold(true, |ok, &v| ok & self.test.in_bounds(v));
            ok.then_some(0)
        }
    }

    /// Element-by-element pass over a block known to contain a violation.
    fn exact<P: ScanProbe>(&self, xs: &[f64], offset: usize, probe: &mut P) -> Result<usize, usize> {
        let mut missing = 0;
        for (k, &v) in xs.iter().enumerate() {
            probe.inspect(offset + k);
            if v.is_nan() {
                if !self.any_missing_ok {
                    return Err(offset + k);
                }
                missing += 1;
            } else if !self.test.holds(v) {
                return Err(offset + k);
            }
        }
        Ok(missing)
    }
}
