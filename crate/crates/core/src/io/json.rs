use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::SymbolTable;
use crate::poly::{Monomial, Polynomial, VarId};

/// `{"variables": [names...], "terms": [{"coeff": c, "vars": [indices...]}...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub variables: Vec<String>,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: i64,
    pub vars: Vec<u32>,
}

/// Document form of `p`; terms come out in graded-lexicographic order.
pub fn polynomial_document(p: &Polynomial, table: &SymbolTable) -> PolynomialDocument {
    let mut table = table.clone();
    if let Some(v) = p.max_var() {
        table.cover(v);
    }
    PolynomialDocument {
        variables: table.names().to_vec(),
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| TermRecord {
                coeff: *c,
                vars: m.vars().iter().map(|v| v.0).collect(),
            })
            .collect(),
    }
}

pub fn to_json(p: &Polynomial, table: &SymbolTable) -> String {
    serde_json::to_string(&polynomial_document(p, table)).expect("document serializes")
}

pub fn from_json(doc: &str) -> Result<(Polynomial, SymbolTable)> {
    let doc: PolynomialDocument = serde_json::from_str(doc)?;
    doc.into_polynomial()
}

impl PolynomialDocument {
    pub fn into_polynomial(self) -> Result<(Polynomial, SymbolTable)> {
        let table = SymbolTable::with_names(self.variables.iter().cloned());
        if table.len() != self.variables.len() {
            return Err(Error::Malformed("duplicate variable names".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if let Some(&bad) = t.vars.iter().find(|&&v| v as usize >= table.len()) {
                return Err(Error::Malformed(format!(
                    "variable index {bad} out of range for {} names",
                    table.len()
                )));
            }
            terms.push((Monomial::new(t.vars.into_iter().map(VarId)), t.coeff));
        }
        Ok((Polynomial::from_terms(terms)?, table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse;

    #[test]
    fn zero_round_trip() {
        let (p, t) = from_json(&to_json(&Polynomial::zero(), &SymbolTable::new())).unwrap();
        assert!(p.is_zero());
        assert!(t.is_empty());
    }

    #[test]
    fn section2_round_trip() {
        let (h, t) = parse("1 + x1*x2*x5 + x1*x6*x7*x8 + x3*x4*x8 - x1*x3*x4").unwrap();
        let json = to_json(&h, &t);
        assert_eq!(from_json(&json).unwrap(), (h, t));
    }

    #[test]
    fn schema_is_exact() {
        let (h, t) = parse("1 + a*b - 2*b").unwrap();
        assert_eq!(
            to_json(&h, &t),
            r#"{"variables":["a","b"],"terms":[{"coeff":1,"vars":[]},{"coeff":-2,"vars":[1]},{"coeff":1,"vars":[0,1]}]}"#
        );
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(from_json("{"), Err(Error::Json(_))));
        assert!(matches!(
            from_json(r#"{"variables":["a"],"terms":[{"coeff":1,"vars":[3]}]}"#),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            from_json(r#"{"variables":["a","a"],"terms":[]}"#),
            Err(Error::Malformed(_))
        ));
    }
}
