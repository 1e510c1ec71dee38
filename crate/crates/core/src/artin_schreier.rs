//! Standard forms of Artin-Schreier classes.
//!
//! Every class `[F] = F + wp(K)` contains exactly one series whose terms all sit at
//! negative odd exponents. [`reduce`] finds it together with the explicit `alpha`
//! satisfying `alpha^2 + alpha = F - standard`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::series::{AsCoefficient, LaurentSeries, Series, DEFAULT_PRECISION};

/// What to do with the constant term of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantPolicy {
    /// Kill it with an Artin-Schreier root, growing the residue field if needed.
    Solve,
    /// Leave it aside and report it; the class is then determined only up to constants.
    Absorb,
}

/// Output of [`reduce`].
#[derive(Clone, Debug)]
pub struct StdFormResult<C> {
    pub standard: LaurentSeries<C>,
    pub witness: LaurentSeries<C>,
    pub field_extended: bool,
    /// Constant left over under [`ConstantPolicy::Absorb`] (zero otherwise).
    pub absorbed: C,
}

/// Standard form over k((t)), solving constants in the residue field.
pub fn reduce(f: &Series, ctx: &mut FieldCtx) -> Result<StdFormResult<FieldElem>> {
    reduce_with(f, ctx, ConstantPolicy::Solve)
}

/// Standard-form reduction over any coefficient ring with square roots.
pub fn reduce_with<C: AsCoefficient>(
    f: &LaurentSeries<C>,
    ctx: &mut FieldCtx,
    policy: ConstantPolicy,
) -> Result<StdFormResult<C>> {
    let needed = match policy {
        ConstantPolicy::Solve => 1,
        ConstantPolicy::Absorb => 0,
    };
    if let Some(p) = f.prec() {
        if p < needed {
            return Err(Error::precision(format!(
                "standard form needs coefficients below t^{needed}, series known below t^{p}"
            )));
        }
    }
    let top_before = ctx.top_level();
    let mut witness: Vec<(i64, C)> = Vec::new();
    let mut standard: Vec<(i64, C)> = Vec::new();
    let mut absorbed = C::zero();

    let positive_end = f.end();
    let bound = match f.prec() {
        Some(p) => p,
        None => DEFAULT_PRECISION.max(positive_end),
    };
    let mut has_positive = false;
    for (n, c) in f.terms().filter(|(n, _)| *n > 0) {
        has_positive = true;
        let mut e = n;
        let mut a = c.clone();
        while e < bound {
            witness.push((e, a.clone()));
            a = a.square();
            e *= 2;
        }
    }

    let c0 = f.coeff(0);
    if !c0.is_certainly_zero() {
        match policy {
            ConstantPolicy::Solve => witness.push((0, c0.as_root(ctx)?)),
            ConstantPolicy::Absorb => absorbed = c0,
        }
    }

    let mut poles: BTreeMap<i64, C> = f
        .terms()
        .filter(|(n, _)| *n < 0)
        .map(|(n, c)| (n, c.clone()))
        .collect();
    while let Some((n, c)) = poles.pop_first() {
        if n % 2 != 0 {
            standard.push((n, c));
            continue;
        }
        let r = c.sqrt()?;
        witness.push((n / 2, r.clone()));
        let slot = poles.entry(n / 2).or_insert_with(C::zero);
        *slot = slot.add(&r);
        if slot.is_certainly_zero() {
            poles.remove(&(n / 2));
        }
    }

    let witness_prec = match f.prec() {
        Some(p) => Some(p),
        None if has_positive => Some(bound),
        None => None,
    };
    Ok(StdFormResult {
        standard: LaurentSeries::from_terms(standard, None),
        witness: LaurentSeries::from_terms(witness, witness_prec),
        field_extended: ctx.top_level() > top_before,
        absorbed,
    })
}

/// Whether `F1` and `F2` generate the same Artin-Schreier extension.
pub fn equivalent(f1: &Series, f2: &Series, ctx: &mut FieldCtx) -> Result<bool> {
    Ok(reduce(f1, ctx)?.standard == reduce(f2, ctx)?.standard)
}

/// Conductor (unique ramification break) of the extension defined by a standard-form series.
pub fn conductor(f: &Series) -> Result<i64> {
    if !f.is_standard() {
        return Err(Error::NotStandardForm(f.to_string()));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput("the extension is trivial".into()));
    }
    f.degree()
}

/// Standard form only, discarding the witness.
pub fn standard_form(f: &Series, ctx: &mut FieldCtx) -> Result<Series> {
    Ok(reduce(f, ctx)?.standard)
}
