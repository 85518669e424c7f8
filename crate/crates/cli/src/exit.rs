use multiproj::arrangement::ArrangementError;
use multiproj::detideal::{DetIdealError, GroebnerError};
use multiproj::hilbert::HilbertError;
use multiproj::monomial::MonomialError;
use multiproj::oracle::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    Input,
    Budget,
}

fn arrangement_budget(e: &ArrangementError) -> bool {
    matches!(e, ArrangementError::SubsetBudgetExceeded { .. })
}

/// Whether a core error is a resource limit rather than bad input.
pub fn is_budget(err: &(dyn std::error::Error + 'static)) -> bool {
    if let Some(e) = err.downcast_ref::<ArrangementError>() {
        return arrangement_budget(e);
    }
    if let Some(e) = err.downcast_ref::<MonomialError>() {
        return matches!(e, MonomialError::BudgetExceeded { .. } | MonomialError::TooManyVariables { .. });
    }
    if let Some(e) = err.downcast_ref::<HilbertError>() {
        return matches!(e, HilbertError::TooLarge(_));
    }
    if let Some(e) = err.downcast_ref::<GroebnerError>() {
        return matches!(e, GroebnerError::VariableBudgetExceeded { .. } | GroebnerError::ExpansionBudgetExceeded { .. });
    }
    if let Some(e) = err.downcast_ref::<DetIdealError>() {
        return match e {
            DetIdealError::BudgetExceeded { .. } | DetIdealError::Groebner(_) => true,
            DetIdealError::Arrangement(a) => arrangement_budget(a),
            _ => false,
        };
    }
    if let Some(e) = err.downcast_ref::<OracleError>() {
        return match e {
            OracleError::BudgetExceeded { .. } => true,
            OracleError::Arrangement(a) => arrangement_budget(a),
            _ => false,
        };
    }
    false
}

pub fn classify(err: &anyhow::Error) -> Failure {
    if err.chain().any(is_budget) {
        Failure::Budget
    } else {
        Failure::Input
    }
}
