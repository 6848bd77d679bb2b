//! Text and JSON formats for polynomials, plus QUBO export.

mod json;
mod parse;
mod qubo;

use std::collections::HashMap;

pub use json::{from_json, polynomial_document, to_json, PolynomialDocument, TermRecord};
pub use parse::{parse, parse_into};
pub use qubo::{export_qubo, QuboExport};

use crate::poly::{Monomial, Polynomial, VarId};

/// Bidirectional name/index map. Indices are dense and handed out in
/// first-appearance order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table whose `k`-th variable is named by `name(k)`.
    pub fn with_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = Self::new();
        for n in names {
            table.intern(&n.into());
        }
        table
    }

    /// `x0, x1, ..., x{n-1}`.
    pub fn indexed(n: usize) -> Self {
        Self::with_names((0..n).map(|k| format!("x{k}")))
    }

    /// Returns the id for `name`, registering it if it is new.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    /// Name of `v`, falling back to `x<index>` for unregistered ids.
    pub fn name(&self, v: VarId) -> String {
        self.names
            .get(v.index())
            .cloned()
            .unwrap_or_else(|| format!("x{}", v.0))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Extends the table so that every id up to `v` has a name.
    pub fn cover(&mut self, v: VarId) {
        while self.names.len() <= v.index() {
            let mut k = self.names.len();
            let mut name = format!("x{k}");
            while self.index.contains_key(&name) {
                k += 1;
                name = format!("x{k}_");
            }
            self.intern(&name);
        }
    }

    fn monomial(&self, m: &Monomial) -> String {
        m.vars()
            .iter()
            .map(|&v| self.name(v))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Renders `p` in the text grammar accepted by [`parse`], terms in
/// graded-lexicographic order.
pub fn serialize(p: &Polynomial, table: &SymbolTable) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        if k == 0 {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if *c < 0 { " - " } else { " + " });
        }
        let abs = c.unsigned_abs();
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else if abs == 1 {
            out.push_str(&table.monomial(m));
        } else {
            out.push_str(&format!("{abs}*{}", table.monomial(m)));
        }
    }
    out
}
