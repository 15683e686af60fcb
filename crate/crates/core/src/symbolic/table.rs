use std::collections::HashMap;

use super::poly::{Poly, Sym};
use super::{Result, SymbolicError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Coordinate,
    Parameter { positive: bool, nonzero: bool },
    /// Square root of a polynomial radicand.
    Aux,
    /// Any other declared name (generator labels, reduced variables, primed copies).
    Free,
}

/// Declared names in declaration order. `i` is reserved for the imaginary unit.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    entries: Vec<(Sym, SymbolKind)>,
    index: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable::default()
    }

    fn insert(&mut self, sym: Sym, kind: SymbolKind) -> Result<Sym> {
        let name = sym.name().to_string();
        if name == "i" || self.index.contains_key(&name) {
            return Err(SymbolicError::Duplicate(name));
        }
        self.index.insert(name, self.entries.len());
        self.entries.push((sym.clone(), kind));
        Ok(sym)
    }

    pub fn coordinate(&mut self, name: &str) -> Result<Sym> {
        self.insert(Sym::new(name), SymbolKind::Coordinate)
    }

    pub fn parameter(&mut self, name: &str, positive: bool, nonzero: bool) -> Result<Sym> {
        self.insert(Sym::new(name), SymbolKind::Parameter { positive, nonzero: nonzero || positive })
    }

    pub fn aux(&mut self, name: &str, radicand: Poly) -> Result<Sym> {
        self.insert(Sym::aux(name, radicand), SymbolKind::Aux)
    }

    pub fn free(&mut self, name: &str) -> Result<Sym> {
        self.insert(Sym::new(name), SymbolKind::Free)
    }

    /// Declares an existing symbol (keeps its radicand when auxiliary).
    pub fn add(&mut self, sym: &Sym, kind: SymbolKind) -> Result<Sym> {
        self.insert(sym.clone(), kind)
    }

    /// Returns the symbol, declaring it as free when absent.
    pub fn ensure(&mut self, name: &str) -> Sym {
        match self.get(name) {
            Some(s) => s.clone(),
            None => self.free(name).expect("fresh name"),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Sym> {
        self.index.get(name).map(|&k| &self.entries[k].0)
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        self.index.get(name).map(|&k| self.entries[k].1)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    fn of_kind(&self, f: impl Fn(SymbolKind) -> bool) -> Vec<Sym> {
        self.entries.iter().filter(|(_, k)| f(*k)).map(|(s, _)| s.clone()).collect()
    }

    pub fn coordinates(&self) -> Vec<Sym> {
        self.of_kind(|k| k == SymbolKind::Coordinate)
    }

    pub fn parameters(&self) -> Vec<Sym> {
        self.of_kind(|k| matches!(k, SymbolKind::Parameter { .. }))
    }

    pub fn aux_symbols(&self) -> Vec<Sym> {
        self.of_kind(|k| k == SymbolKind::Aux)
    }

    pub fn entries(&self) -> &[(Sym, SymbolKind)] {
        &self.entries
    }
}
