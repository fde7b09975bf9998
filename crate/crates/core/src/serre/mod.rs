//! Identity engine: Lusztig's f-function and the higher-order Serre
//! relations, their root-of-unity forms, the site-operator forms, and the
//! loop-generator lemmas with the nested Serre relations.

pub mod expand;
pub mod higher;
pub mod loops;
pub mod site;

use crate::bank::{Factor, OperatorBank};
use crate::check::{timed, IdentityCheck, Status};
use crate::error::Result;
use crate::qcomb::laurent::LaurentPoly;
use crate::scalar::Scalar;
use crate::terms::{evaluate, finish, Evaluation, Term};

pub use expand::{left_nested, FreeElem};
pub use higher::{
    check_bcb, check_bcbc, check_bcn, check_g_forms, check_higher_serre, check_id1, check_id2, check_regime,
    check_wrap_product, lusztig_f, lusztig_f_terms, regime, Branch, Pair, Regime,
};
pub use loops::{check_lemma_chain, check_serre_nested, LoopFamily, LoopGenerators, NestedRelation};
pub use site::{check_site_suite, check_site_vs_pm, Side, SiteIdentity};

/// `coeff · (product of the word)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTerm {
    pub coeff: LaurentPoly,
    pub word: Vec<Factor>,
}

impl WordTerm {
    pub fn new(coeff: LaurentPoly, word: Vec<Factor>) -> WordTerm {
        WordTerm { coeff, word }
    }

    pub fn plus(word: Vec<Factor>) -> WordTerm {
        WordTerm::new(LaurentPoly::one(), word)
    }

    pub fn minus(word: Vec<Factor>) -> WordTerm {
        WordTerm::new(-LaurentPoly::one(), word)
    }

    pub fn scaled(mut self, c: &LaurentPoly) -> WordTerm {
        self.coeff = &self.coeff * c;
        self
    }
}

pub fn eval_words<S: Scalar>(bank: &OperatorBank<S>, terms: &[WordTerm]) -> Result<Evaluation<S>> {
    let ops = terms.iter().map(|t| bank.word(&t.word)).collect::<Result<Vec<_>>>()?;
    let ts: Vec<Term<'_, S>> = terms
        .iter()
        .zip(&ops)
        .map(|(t, op)| Term::new(t.coeff.clone(), vec![op.as_ref()]))
        .collect();
    evaluate(bank.layout(), bank.sctx(), &ts)
}

/// Chain parameters every operator-level check records.
pub fn chain_params<S: Scalar>(check: IdentityCheck, bank: &OperatorBank<S>) -> IdentityCheck {
    let c = bank.chain();
    let check = check
        .param("backend", c.rep().kind().name())
        .param("N", c.n())
        .param("L", c.sites() as u64)
        .param("ring", bank.mode().name());
    if bank.rescaled() {
        check.param("rescaled", true)
    } else {
        check
    }
}

/// Evaluates word terms into a timed check.
pub fn run_words<S: Scalar>(
    bank: &OperatorBank<S>,
    check: IdentityCheck,
    terms: Result<Vec<WordTerm>>,
) -> IdentityCheck {
    timed(|| {
        let check = chain_params(check, bank);
        match terms {
            Ok(t) => finish(check, eval_words(bank, &t)),
            Err(e) => check.with_status(Status::from_error(&e)),
        }
    })
}
