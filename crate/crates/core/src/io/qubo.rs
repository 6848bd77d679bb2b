use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::SymbolTable;
use crate::poly::{Polynomial, VarId};

/// Degree-2 objective split into offset, linear and pairwise parts.
///
/// Serializes as `{"variables":[...],"offset":c,"linear":{"i":c,...},"quadratic":[[i,j,c],...]}`
/// with `i < j`. Minimization convention; the constant is never dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuboExport {
    pub variables: Vec<String>,
    pub offset: i64,
    pub linear: BTreeMap<u32, i64>,
    pub quadratic: Vec<(u32, u32, i64)>,
}

pub fn export_qubo(p: &Polynomial, table: &SymbolTable) -> Result<QuboExport> {
    let mut out = QuboExport {
        variables: crate::io::polynomial_document(p, table).variables,
        ..Default::default()
    };
    for (m, c) in p.terms() {
        match m.vars() {
            [] => out.offset = *c,
            [v] => {
                out.linear.insert(v.0, *c);
            }
            [a, b] => out.quadratic.push((a.0, b.0, *c)),
            _ => {
                let name = m
                    .vars()
                    .iter()
                    .map(|&v| table.name(v))
                    .collect::<Vec<_>>()
                    .join("*");
                return Err(Error::DegreeTooHigh(name));
            }
        }
    }
    Ok(out)
}

impl QuboExport {
    /// `offset + linear + quadratic` under `bits`, indexed by variable id.
    pub fn energy(&self, bit: impl Fn(VarId) -> bool) -> i64 {
        let lin: i64 = self
            .linear
            .iter()
            .filter(|(&v, _)| bit(VarId(v)))
            .map(|(_, c)| c)
            .sum();
        let quad: i64 = self
            .quadratic
            .iter()
            .filter(|(i, j, _)| bit(VarId(*i)) && bit(VarId(*j)))
            .map(|(_, _, c)| c)
            .sum();
        self.offset + lin + quad
    }
}
