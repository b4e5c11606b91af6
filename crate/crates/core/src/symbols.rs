//! The CE symbol alphabet `R^a_m`, formal integer sums of symbols, and
//! unordered configurations of symbols.
//!
//! Twelve canonical types exist per degree: `E^0..E^2`, `H^1, H^2`,
//! `T^0..T^3`, `Q^2..Q^4`. The extended alphabet also admits `H^0`, `Q^0`,
//! `Q^1`, which denote a canonical type with opposite co-orientation and are
//! folded away on input (`H^0 = -H^2`, `Q^0 = -Q^4`, `Q^1 = -Q^3`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("superscript {sup} is outside the alphabet for family {family}")]
    BadSuperscript { family: Family, sup: u8 },
    #[error("symbol {0} is not canonical")]
    NotCanonical(Symbol),
    #[error("a configuration needs at least one symbol")]
    EmptyConfiguration,
    #[error("cannot parse symbol {0:?}; expected e.g. E^2_-1")]
    Parse(String),
    #[error("degree window size must be at least 1, got {0}")]
    BadWindow(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    E,
    H,
    T,
    Q,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::E, Family::H, Family::T, Family::Q];

    pub fn canonical_supers(self) -> RangeInclusive<u8> {
        match self {
            Family::E => 0..=2,
            Family::H => 1..=2,
            Family::T => 0..=3,
            Family::Q => 2..=4,
        }
    }

    pub fn extended_supers(self) -> RangeInclusive<u8> {
        match self {
            Family::E => 0..=2,
            Family::H => 0..=2,
            Family::T => 0..=3,
            Family::Q => 0..=4,
        }
    }

    fn letter(self) -> char {
        match self {
            Family::E => 'E',
            Family::H => 'H',
            Family::T => 'T',
            Family::Q => 'Q',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One expression `R^a_m`. Ordered lexicographically by (family, super, degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    family: Family,
    sup: u8,
    degree: i64,
}

impl Symbol {
    /// Accepts the extended alphabet.
    pub fn new(family: Family, sup: u8, degree: i64) -> Result<Self, SymbolError> {
        if !family.extended_supers().contains(&sup) {
            return Err(SymbolError::BadSuperscript { family, sup });
        }
        Ok(Symbol { family, sup, degree })
    }

    /// Canonical symbol; panics outside the canonical alphabet. Intended for
    /// literals in code whose superscripts are fixed.
    pub fn canon(family: Family, sup: u8, degree: i64) -> Self {
        assert!(family.canonical_supers().contains(&sup), "{family}^{sup} is not canonical");
        Symbol { family, sup, degree }
    }

    pub fn e(sup: u8, degree: i64) -> Self {
        Self::canon(Family::E, sup, degree)
    }
    pub fn h(sup: u8, degree: i64) -> Self {
        Self::canon(Family::H, sup, degree)
    }
    pub fn t(sup: u8, degree: i64) -> Self {
        Self::canon(Family::T, sup, degree)
    }
    pub fn q(sup: u8, degree: i64) -> Self {
        Self::canon(Family::Q, sup, degree)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn sup(&self) -> u8 {
        self.sup
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_canonical(&self) -> bool {
        self.family.canonical_supers().contains(&self.sup)
    }

    /// Folds `H^0`, `Q^0`, `Q^1` onto their canonical partners with sign -1.
    pub fn canonicalize(&self) -> SignedSymbol {
        let flip = |sup| SignedSymbol { sign: -1, symbol: Symbol { sup, ..*self } };
        match (self.family, self.sup) {
            (Family::H, 0) => flip(2),
            (Family::Q, 0) => flip(4),
            (Family::Q, 1) => flip(3),
            _ => SignedSymbol { sign: 1, symbol: *self },
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}_{}", self.family, self.sup, self.degree)
    }
}

impl FromStr for Symbol {
    type Err = SymbolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SymbolError::Parse(s.to_string());
        let mut chars = s.trim().chars();
        let family = match chars.next() {
            Some('E') => Family::E,
            Some('H') => Family::H,
            Some('T') => Family::T,
            Some('Q') => Family::Q,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().strip_prefix('^').ok_or_else(bad)?;
        let (sup, degree) = rest.split_once('_').ok_or_else(bad)?;
        let sup: u8 = sup.parse().map_err(|_| bad())?;
        let degree: i64 = degree.parse().map_err(|_| bad())?;
        Symbol::new(family, sup, degree)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A canonical symbol with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedSymbol {
    pub sign: i8,
    pub symbol: Symbol,
}

/// Finite integer combination of canonical symbols; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSum {
    terms: BTreeMap<Symbol, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Canonicalizes each symbol, folds signs into coefficients, merges
    /// duplicates and drops zeros.
    pub fn normalize<I>(pairs: I) -> Result<Self, SymbolError>
    where
        I: IntoIterator<Item = (i64, Symbol)>,
    {
        let mut sum = FormalSum::zero();
        for (c, s) in pairs {
            if !s.family.extended_supers().contains(&s.sup) {
                return Err(SymbolError::BadSuperscript { family: s.family, sup: s.sup });
            }
            sum.add_term(c, s);
        }
        Ok(sum)
    }

    pub fn single(symbol: Symbol) -> Self {
        let mut s = Self::zero();
        s.add_term(1, symbol);
        s
    }

    /// Adds `coeff * symbol`, canonicalizing the symbol first.
    pub fn add_term(&mut self, coeff: i64, symbol: Symbol) {
        let signed = symbol.canonicalize();
        let c = coeff * i64::from(signed.sign);
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(signed.symbol).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&signed.symbol);
        }
    }

    pub fn add_scaled(&mut self, coeff: i64, other: &FormalSum) {
        for (s, c) in &other.terms {
            self.add_term(coeff * c, *s);
        }
    }

    pub fn coeff(&self, symbol: &Symbol) -> i64 {
        self.terms.get(symbol).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, i64)> + '_ {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.terms.keys()
    }

    pub fn negated(&self) -> Self {
        FormalSum { terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect() }
    }

    /// Substitutes each symbol by a sum, `Σ c_s · f(s)`.
    pub fn substitute<F>(&self, mut f: F) -> FormalSum
    where
        F: FnMut(&Symbol) -> FormalSum,
    {
        let mut out = FormalSum::zero();
        for (s, c) in &self.terms {
            out.add_scaled(*c, &f(s));
        }
        out
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            match (i, sign) {
                (0, "+") => {}
                (0, _) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for FormalSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.terms.iter().map(|(s, c)| (s.to_string(), c)))
    }
}

/// An unordered multiset of canonical symbols, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<Symbol>);

impl Configuration {
    pub fn new(mut symbols: Vec<Symbol>) -> Result<Self, SymbolError> {
        if symbols.is_empty() {
            return Err(SymbolError::EmptyConfiguration);
        }
        if let Some(s) = symbols.iter().find(|s| !s.is_canonical()) {
            return Err(SymbolError::NotCanonical(*s));
        }
        symbols.sort_unstable();
        Ok(Configuration(symbols))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// This configuration with one more symbol.
    pub fn with(&self, symbol: Symbol) -> Result<Self, SymbolError> {
        let mut v = self.0.clone();
        v.push(symbol);
        Configuration::new(v)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(", "))
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

/// Degree truncation: E, H, T degrees in `[-M, M]`, Q degrees in `[-M+1, M]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DegreeWindow {
    m: i64,
}

impl DegreeWindow {
    pub fn new(m: i64) -> Result<Self, SymbolError> {
        if m < 1 {
            return Err(SymbolError::BadWindow(m));
        }
        Ok(DegreeWindow { m })
    }

    pub fn size(&self) -> i64 {
        self.m
    }

    pub fn degrees(&self, family: Family) -> RangeInclusive<i64> {
        match family {
            Family::Q => -self.m + 1..=self.m,
            _ => -self.m..=self.m,
        }
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.degrees(s.family).contains(&s.degree)
    }

    /// All canonical symbols in the window, in symbol order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for family in Family::ALL {
            for sup in family.canonical_supers() {
                for degree in self.degrees(family) {
                    out.push(Symbol { family, sup, degree });
                }
            }
        }
        out
    }

    /// All multisets of `n` in-window symbols, each exactly once, sorted.
    pub fn configurations(&self, n: usize) -> Vec<Configuration> {
        assert!(n >= 1, "configurations need n >= 1");
        self.symbols().into_iter().combinations_with_replacement(n).map(Configuration).collect()
    }
}

pub fn enumerate_symbols(w: &DegreeWindow) -> Vec<Symbol> {
    w.symbols()
}

pub fn enumerate_configurations(n: usize, w: &DegreeWindow) -> Vec<Configuration> {
    w.configurations(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonicalize_examples() {
        let h0 = Symbol::new(Family::H, 0, 5).unwrap();
        assert_eq!(h0.canonicalize(), SignedSymbol { sign: -1, symbol: Symbol::h(2, 5) });
        let q1 = Symbol::new(Family::Q, 1, 0).unwrap();
        assert_eq!(q1.canonicalize(), SignedSymbol { sign: -1, symbol: Symbol::q(3, 0) });
        let q0 = Symbol::new(Family::Q, 0, -2).unwrap();
        assert_eq!(q0.canonicalize(), SignedSymbol { sign: -1, symbol: Symbol::q(4, -2) });
        assert_eq!(Symbol::t(2, 3).canonicalize(), SignedSymbol { sign: 1, symbol: Symbol::t(2, 3) });
    }

    #[test]
    fn alphabet_bounds() {
        for (f, a) in [(Family::E, 3), (Family::T, 4), (Family::Q, 5), (Family::H, 3)] {
            assert_eq!(Symbol::new(f, a, 0), Err(SymbolError::BadSuperscript { family: f, sup: a }));
        }
    }

    #[test]
    fn parse_and_print() {
        let s: Symbol = "E^2_-1".parse().unwrap();
        assert_eq!(s, Symbol::e(2, -1));
        assert_eq!(s.to_string(), "E^2_-1");
        assert_eq!("Q^3_0".parse::<Symbol>().unwrap(), Symbol::q(3, 0));
        assert_eq!("H^0_4".parse::<Symbol>().unwrap().canonicalize().symbol, Symbol::h(2, 4));
        for bad in ["", "X^1_0", "E2_0", "E^2", "E^x_0", "T^4_0"] {
            assert!(bad.parse::<Symbol>().is_err(), "{bad}");
        }
    }

    #[test]
    fn normalize_examples() {
        let h0 = Symbol::new(Family::H, 0, 2).unwrap();
        assert!(FormalSum::normalize([(1, h0), (1, Symbol::h(2, 2))]).unwrap().is_zero());
        assert!(FormalSum::normalize([(1, Symbol::e(0, 0)), (-1, Symbol::e(0, 0))]).unwrap().is_zero());
        let q0 = Symbol::new(Family::Q, 0, 1).unwrap();
        let s = FormalSum::normalize([(1, q0), (2, Symbol::q(4, 1))]).unwrap();
        assert_eq!(s, FormalSum::single(Symbol::q(4, 1)));
        assert_eq!(s.to_string(), "Q^4_1");
    }

    #[test]
    fn sum_display() {
        let s = FormalSum::normalize([(1, Symbol::q(2, 1)), (-1, Symbol::q(2, 0)), (2, Symbol::h(1, 0))]).unwrap();
        assert_eq!(s.to_string(), "2H^1_0 - Q^2_0 + Q^2_1");
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"H^1_0":2,"Q^2_0":-1,"Q^2_1":1}"#);
    }

    #[test]
    fn configuration_examples() {
        let a = Configuration::new(vec![Symbol::q(3, 1), Symbol::q(2, 0)]).unwrap();
        let b = Configuration::new(vec![Symbol::q(2, 0), Symbol::q(3, 1)]).unwrap();
        assert_eq!(a, b);
        let rep = Configuration::new(vec![Symbol::t(2, 0), Symbol::t(2, 0)]).unwrap();
        assert_eq!(rep.symbols(), &[Symbol::t(2, 0), Symbol::t(2, 0)]);
        assert_eq!(Configuration::new(vec![Symbol::h(1, 0)]).unwrap().order(), 1);
        assert_eq!(Configuration::new(vec![]), Err(SymbolError::EmptyConfiguration));
        let h0 = Symbol::new(Family::H, 0, 0).unwrap();
        assert_eq!(Configuration::new(vec![h0]), Err(SymbolError::NotCanonical(h0)));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"["Q^2_0","Q^3_1"]"#);
    }

    #[test]
    fn window_counts() {
        let w = DegreeWindow::new(1).unwrap();
        assert_eq!(w.symbols().len(), 9 * 3 + 3 * 2);
        assert_eq!(w.configurations(1).len(), 33);
        assert_eq!(w.configurations(2).len(), 33 * 34 / 2);
        assert!(DegreeWindow::new(0).is_err());
        let w2 = DegreeWindow::new(2).unwrap();
        assert_eq!(w2.symbols().len(), 57);
        assert!(!w2.contains(&Symbol::q(2, -2)));
        assert!(w2.contains(&Symbol::t(2, -2)));
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn any_extended() -> impl Strategy<Value = Symbol> {
        (0usize..4, 0u8..5, -3i64..4).prop_filter_map("in extended alphabet", |(f, a, m)| {
            Symbol::new(Family::ALL[f], a, m).ok()
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(s in any_extended()) {
            let c = s.canonicalize();
            prop_assert!(c.symbol.is_canonical());
            prop_assert_eq!(c.symbol.canonicalize(), SignedSymbol { sign: 1, symbol: c.symbol });
        }

        #[test]
        fn normalization_is_a_projection(pairs in prop::collection::vec((-3i64..4, any_extended()), 0..12)) {
            let once = FormalSum::normalize(pairs).unwrap();
            let twice = FormalSum::normalize(once.terms().map(|(s, c)| (c, *s))).unwrap();
            prop_assert!(once.symbols().all(Symbol::is_canonical));
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn configuration_counts(m in 1i64..3, n in 1usize..4) {
            let w = DegreeWindow::new(m).unwrap();
            let s = w.symbols().len() as u64;
            let confs = w.configurations(n);
            prop_assert_eq!(confs.len() as u64, binomial(s + n as u64 - 1, n as u64));
            prop_assert!(confs.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn configuration_is_permutation_invariant() {
        let pool = [Symbol::q(2, 0), Symbol::t(1, -1), Symbol::e(0, 1), Symbol::q(2, 0)];
        for n in 1..=4 {
            let base = Configuration::new(pool[..n].to_vec()).unwrap();
            for perm in pool[..n].iter().copied().permutations(n) {
                assert_eq!(Configuration::new(perm).unwrap(), base);
            }
        }
    }
}
