use super::{turan_multigraph, turan_simple, SearchConfig, Value};
use crate::bits;
use crate::error::{param, Error, Result};
use crate::multigraph::ForbiddenPattern;
use serde::Serialize;
use std::ops::RangeInclusive;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityPoint {
    pub n: u32,
    pub value: u64,
    /// `C(n, r)`
    pub total: u128,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensitySequence {
    pub pattern: ForbiddenPattern,
    pub points: Vec<DensityPoint>,
}

/// Turán numbers of `p` for every `n` in `range`, each divided by `C(n, r)`.
///
/// Checks, in exact arithmetic, that the ratios never increase and that every value stays
/// below `e / C(v, r)` times `C(n, r)`. A point that is not proven optimal fails the whole
/// sequence.
pub fn density_sequence(p: &ForbiddenPattern, range: RangeInclusive<u32>, config: &SearchConfig) -> Result<DensitySequence> {
    if *range.start() < p.v {
        return param(format!("the range must start at v = {} or later", p.v));
    }
    let mut points = Vec::new();
    for n in range {
        let res = if p.simple { turan_simple(n, p, config)? } else { turan_multigraph(n, p, config)? };
        let Value::Finite(value) = res.value else {
            return Err(Error::Verification(format!("no finite Turán number at n = {n}")));
        };
        if !res.is_proven() {
            return Err(Error::Budget { budget: config.budget });
        }
        let total = bits::binom(i64::from(n), i64::from(p.r));
        points.push(DensityPoint { n, value, total, ratio: value as f64 / total as f64 });
    }
    let per_vset = bits::binom(i64::from(p.v), i64::from(p.r));
    for pt in &points {
        if u128::from(pt.value) * per_vset >= u128::from(p.e) * pt.total {
            return Err(Error::Verification(format!(
                "EX({}) = {} is not below {}/{} of C(n, r)",
                pt.n, pt.value, p.e, per_vset
            )));
        }
    }
    for w in points.windows(2) {
        if u128::from(w[1].value) * w[0].total > u128::from(w[0].value) * w[1].total {
            return Err(Error::Verification(format!("density increases from n = {} to n = {}", w[0].n, w[1].n)));
        }
    }
    Ok(DensitySequence { pattern: *p, points })
}
