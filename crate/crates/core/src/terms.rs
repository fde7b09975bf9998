//! Evaluating an identity `Σ c_t · (product of operators) = 0` and grading
//! its outcome.

use std::sync::Arc;

use crate::check::{IdentityCheck, Status, Witness};
use crate::error::Result;
use crate::qcomb::laurent::LaurentPoly;
use crate::repchain::operator::{Entry, GradedOperator, Layout};
use crate::scalar::Scalar;

pub struct Term<'a, S: Scalar> {
    pub coeff: LaurentPoly,
    pub factors: Vec<&'a GradedOperator<S>>,
}

impl<'a, S: Scalar> Term<'a, S> {
    pub fn new(coeff: LaurentPoly, factors: Vec<&'a GradedOperator<S>>) -> Self {
        Term { coeff, factors }
    }

    pub fn plus(factors: Vec<&'a GradedOperator<S>>) -> Self {
        Term::new(LaurentPoly::one(), factors)
    }

    pub fn minus(factors: Vec<&'a GradedOperator<S>>) -> Self {
        Term::new(-LaurentPoly::one(), factors)
    }
}

pub struct Evaluation<S: Scalar> {
    pub residual: GradedOperator<S>,
    pub term_nonzero: Vec<bool>,
    pub nontrivial: Option<Entry>,
}

/// Left-to-right product; the empty product is the identity.
pub fn product<S: Scalar>(
    layout: &Arc<Layout>,
    ctx: S::Ctx,
    factors: &[&GradedOperator<S>],
) -> Result<GradedOperator<S>> {
    let Some((first, rest)) = factors.split_first() else {
        return Ok(GradedOperator::identity(layout, ctx));
    };
    let mut acc = (*first).clone();
    for f in rest {
        if acc.is_zero() {
            let charge = (acc.charge() + f.charge()) % layout.n();
            acc = GradedOperator::zero(layout, ctx, charge);
            continue;
        }
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

pub fn evaluate<S: Scalar>(
    layout: &Arc<Layout>,
    ctx: S::Ctx,
    terms: &[Term<'_, S>],
) -> Result<Evaluation<S>> {
    let mut residual: Option<GradedOperator<S>> = None;
    let mut term_nonzero = Vec::with_capacity(terms.len());
    let mut best: Option<(usize, Entry)> = None;
    for t in terms {
        let value = product(layout, ctx, &t.factors)?.scale_laurent(&t.coeff);
        let nz = !value.is_negligible();
        term_nonzero.push(nz);
        if nz && best.as_ref().map_or(true, |(n, _)| value.nnz() > *n) {
            if let Some(e) = value.witness_entry() {
                best = Some((value.nnz(), e));
            }
        }
        residual = Some(match residual {
            None => value,
            Some(r) => r.add(&value)?,
        });
    }
    let residual = residual.unwrap_or_else(|| GradedOperator::zero(layout, ctx, 0));
    Ok(Evaluation {
        residual,
        term_nonzero,
        nontrivial: best.map(|(_, e)| e),
    })
}

fn to_witness(e: Entry, term: Option<usize>) -> Witness {
    Witness {
        term,
        row: e.row,
        col: e.col,
        value: e.value,
    }
}

impl<S: Scalar> Evaluation<S> {
    pub fn status(&self) -> Status {
        let any = self.term_nonzero.iter().any(|&b| b);
        if S::EXACT {
            if !self.residual.is_zero() {
                let e = self.residual.first_entry().expect("nonzero residual");
                return Status::Nonzero {
                    witness: to_witness(e, None),
                };
            }
            return if any {
                Status::ExactZero
            } else {
                Status::VacuousZero
            };
        }
        if !self.residual.is_negligible() {
            let e = self.residual.witness_entry().expect("nonzero residual");
            return Status::Nonzero {
                witness: to_witness(e, None),
            };
        }
        if any {
            Status::ApproxZero {
                max_residual: self.residual.max_magnitude(),
            }
        } else {
            Status::VacuousZero
        }
    }
}

/// Fills `check` from an evaluation outcome.
pub fn finish<S: Scalar>(mut check: IdentityCheck, eval: Result<Evaluation<S>>) -> IdentityCheck {
    match eval {
        Ok(ev) => {
            check.status = ev.status();
            check.nontrivial = ev.nontrivial.clone().map(|e| to_witness(e, None));
            check.term_nonzero = ev.term_nonzero;
        }
        Err(e) => check.status = Status::from_error(&e),
    }
    check
}

/// `lhs = rhs` as a two-term identity.
pub fn equality<'a, S: Scalar>(
    lhs: Vec<&'a GradedOperator<S>>,
    rhs_coeff: LaurentPoly,
    rhs: Vec<&'a GradedOperator<S>>,
) -> Vec<Term<'a, S>> {
    vec![Term::plus(lhs), Term::new(-rhs_coeff, rhs)]
}
