use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use super::families::{raw_relation_instances, relation_matrix, RelationInstance, RelationTag};
use crate::abelian::{presentation_quotient, GroupElement, GroupSpec, IntMatrix, Quotient};
use crate::symbols::{DegreeWindow, Family, FormalSum, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("symbol {0} lies outside the degree window")]
    OutOfWindow(Symbol),
    #[error("symbol {0} is not canonical")]
    NotCanonical(Symbol),
}

/// Quotient of the free abelian group on the in-window symbols by the raw
/// relations.
#[derive(Clone, Debug)]
pub struct UniversalGroupResult {
    pub window: DegreeWindow,
    pub group: GroupSpec,
    pub symbols: Vec<Symbol>,
    quotient: Quotient,
    images: BTreeMap<Symbol, GroupElement>,
}

impl UniversalGroupResult {
    pub fn image(&self, s: &Symbol) -> Option<&GroupElement> {
        self.images.get(s)
    }

    pub fn images(&self) -> &BTreeMap<Symbol, GroupElement> {
        &self.images
    }

    /// Image of a formal sum of in-window symbols.
    pub fn project(&self, sum: &FormalSum) -> Option<GroupElement> {
        let mut v = vec![BigInt::from(0); self.symbols.len()];
        for (s, c) in sum.terms() {
            let i = self.symbols.binary_search(s).ok()?;
            v[i] += c;
        }
        Some(self.quotient.project(&v))
    }

    /// Images of the named generators `t^2_m, t^3_m, h^2_0, h^1_0, q^2_0`,
    /// keyed by the symbols they are the images of.
    pub fn named_generators(&self) -> Vec<(Symbol, GroupElement)> {
        named_generator_symbols(&self.window).into_iter().map(|s| (s, self.images[&s].clone())).collect()
    }

    /// Whether the named generators generate the group.
    pub fn named_generators_generate(&self) -> bool {
        let g = &self.group;
        let n = g.num_coords();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..n {
            if let Some(d) = g.coord_order(i) {
                let mut r = vec![BigInt::from(0); n];
                r[i] = d.clone();
                rows.push(r);
            }
        }
        rows.extend(self.named_generators().into_iter().map(|(_, e)| e.0));
        presentation_quotient(n, &IntMatrix::from_rows(n, &rows)).group().is_trivial()
    }

    /// Whether the named generators form the basis of the closed-form
    /// presentation: free rank `4M+3`, the two torsion generators `h^1_0`,
    /// `q^2_0` of order dividing 2, and together they generate. Since a
    /// surjection between isomorphic finitely generated abelian groups is an
    /// isomorphism, this certifies the presentation.
    pub fn is_named_basis(&self) -> bool {
        let expected = expected_universal_group(&self.window);
        let two = BigInt::from(2);
        let torsion_ok = [Symbol::h(1, 0), Symbol::q(2, 0)]
            .iter()
            .all(|s| self.group.scale(&two, &self.images[s]).is_zero());
        self.group == expected && torsion_ok && self.named_generators_generate()
    }
}

/// `Z^(4M+3) + (Z/2)^2`.
pub fn expected_universal_group(window: &DegreeWindow) -> GroupSpec {
    GroupSpec::new((4 * window.size() + 3) as usize, vec![BigInt::from(2), BigInt::from(2)])
        .expect("valid chain")
}

/// The symbols whose images are the named generators, in the order
/// `T^2_m` (ascending m), `T^3_m`, `H^2_0`, `H^1_0`, `Q^2_0`.
pub fn named_generator_symbols(window: &DegreeWindow) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = window.degrees(Family::T).map(|m| Symbol::t(2, m)).collect();
    out.extend(window.degrees(Family::T).map(|m| Symbol::t(3, m)));
    out.extend([Symbol::h(2, 0), Symbol::h(1, 0), Symbol::q(2, 0)]);
    out
}

pub fn universal_group(window: &DegreeWindow) -> UniversalGroupResult {
    universal_group_from(window, &raw_relation_instances(window))
}

/// Same quotient for an arbitrary relation list over the window's symbols.
pub fn universal_group_from(window: &DegreeWindow, relations: &[RelationInstance]) -> UniversalGroupResult {
    let symbols = window.symbols();
    let quotient = presentation_quotient(symbols.len(), &relation_matrix(relations, window));
    let images = symbols.iter().enumerate().map(|(i, s)| (*s, quotient.generator_image(i))).collect();
    UniversalGroupResult { window: *window, group: quotient.group().clone(), symbols, quotient, images }
}

/// Deliberate corruptions of the closed formulas, used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaMutation {
    /// `H^2_m = h^2_0 + Σ t^3_k` for `m >= 0`, i.e. without the `- t^2_k` terms.
    DropT2FromPositiveH2,
}

/// The closed formulas expressing `g_U` on every symbol through the named
/// generators. Results are formal sums over the named-generator symbols
/// `T^2_k`, `T^3_k`, `H^2_0`, `H^1_0`, `Q^2_0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedForms {
    pub mutation: Option<FormulaMutation>,
}

impl ClosedForms {
    pub fn eval(&self, s: &Symbol, window: &DegreeWindow) -> Result<FormalSum, ClosedFormError> {
        if !s.is_canonical() {
            return Err(ClosedFormError::NotCanonical(*s));
        }
        if !window.contains(s) {
            return Err(ClosedFormError::OutOfWindow(*s));
        }
        Ok(self.formula(s.family(), s.sup(), s.degree()))
    }

    fn t(a: u8, k: i64) -> FormalSum {
        FormalSum::single(Symbol::t(a, k))
    }

    fn h2(&self, m: i64) -> FormalSum {
        let mut out = FormalSum::single(Symbol::h(2, 0));
        if m >= 0 {
            for k in 1..=m {
                out.add_term(1, Symbol::t(3, k));
                if self.mutation != Some(FormulaMutation::DropT2FromPositiveH2) {
                    out.add_term(-1, Symbol::t(2, k));
                }
            }
        } else {
            for k in m + 1..=0 {
                out.add_term(-1, Symbol::t(3, k));
                out.add_term(1, Symbol::t(2, k));
            }
        }
        out
    }

    fn q3(&self, m: i64) -> FormalSum {
        let mut out = FormalSum::single(Symbol::q(2, 0));
        out.add_term(1, Symbol::t(2, m));
        out.add_term(-1, Symbol::t(2, m - 1));
        out
    }

    fn formula(&self, family: Family, sup: u8, m: i64) -> FormalSum {
        match (family, sup) {
            (Family::H, 1) | (Family::E, 1) => FormalSum::single(Symbol::h(1, 0)),
            (Family::H, 2) | (Family::E, 2) => self.h2(m),
            (Family::E, 0) => self.h2(m).negated(),
            (Family::T, 0) | (Family::T, 3) => Self::t(3, m),
            (Family::T, 1) | (Family::T, 2) => Self::t(2, m),
            (Family::Q, 2) => FormalSum::single(Symbol::q(2, 0)),
            (Family::Q, 3) => self.q3(m),
            (Family::Q, 4) => {
                let mut out = self.q3(m);
                out.add_term(1, Symbol::t(3, m));
                out.add_term(-1, Symbol::t(3, m - 1));
                out
            }
            _ => unreachable!("canonical symbols only"),
        }
    }
}

/// `g_U(s)` through the closed formulas.
pub fn eval_gu_closed(s: &Symbol, window: &DegreeWindow) -> Result<FormalSum, ClosedFormError> {
    ClosedForms::default().eval(s, window)
}

/// Reduces a sum over named generators in the closed-form presentation,
/// where `h^1_0` and `q^2_0` have order 2: their coefficients become 0 or 1.
pub fn reduce_in_presentation(sum: &FormalSum) -> FormalSum {
    let torsion = [Symbol::h(1, 0), Symbol::q(2, 0)];
    FormalSum::normalize(sum.terms().map(|(s, c)| if torsion.contains(s) { (c.rem_euclid(2), *s) } else { (c, *s) }))
        .expect("canonical")
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolViolation {
    pub symbol: Symbol,
    pub closed_form: FormalSum,
    pub closed_image: GroupElement,
    pub quotient_image: GroupElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationViolation {
    pub relation: FormalSum,
    pub families: Vec<RelationTag>,
    pub residual: FormalSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub window: i64,
    pub symbols_checked: usize,
    pub relations_checked: usize,
    pub symbol_violations: Vec<SymbolViolation>,
    pub relation_violations: Vec<RelationViolation>,
}

impl CrosscheckReport {
    pub fn violation_count(&self) -> usize {
        self.symbol_violations.len() + self.relation_violations.len()
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }
}

/// Compares the closed formulas against the quotient computation:
/// (a) per symbol, the closed form pushed through the named generator images
/// equals the quotient image; (b) every raw relation vanishes after
/// substituting closed forms, in the presentation with `2h^1_0 = 2q^2_0 = 0`.
pub fn crosscheck_gu(window: &DegreeWindow) -> CrosscheckReport {
    crosscheck_gu_with(window, &ClosedForms::default())
}

pub fn crosscheck_gu_with(window: &DegreeWindow, forms: &ClosedForms) -> CrosscheckReport {
    let ug = universal_group(window);
    let named: BTreeMap<Symbol, GroupElement> = ug.named_generators().into_iter().collect();

    let mut symbol_violations = Vec::new();
    for s in &ug.symbols {
        let closed = forms.eval(s, window).expect("in-window canonical symbol");
        let closed_image =
            ug.group.combine(closed.terms().map(|(g, c)| (BigInt::from(c), &named[g])));
        let quotient_image = ug.images[s].clone();
        if closed_image != quotient_image {
            symbol_violations.push(SymbolViolation { symbol: *s, closed_form: closed, closed_image, quotient_image });
        }
    }

    let relations = raw_relation_instances(window);
    let mut relation_violations = Vec::new();
    for r in &relations {
        let substituted = r.sum.substitute(|s| forms.eval(s, window).expect("in-window canonical symbol"));
        let residual = reduce_in_presentation(&substituted);
        if !residual.is_zero() {
            relation_violations.push(RelationViolation {
                relation: r.sum.clone(),
                families: r.provenance.iter().map(|p| p.family).collect(),
                residual,
            });
        }
    }

    CrosscheckReport {
        window: window.size(),
        symbols_checked: ug.symbols.len(),
        relations_checked: relations.len(),
        symbol_violations,
        relation_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: i64) -> DegreeWindow {
        DegreeWindow::new(m).unwrap()
    }

    fn sum(terms: &[(i64, Symbol)]) -> FormalSum {
        FormalSum::normalize(terms.iter().copied()).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let w3 = w(3);
        assert_eq!(
            eval_gu_closed(&Symbol::h(2, 2), &w3).unwrap(),
            sum(&[
                (1, Symbol::h(2, 0)),
                (1, Symbol::t(3, 1)),
                (-1, Symbol::t(2, 1)),
                (1, Symbol::t(3, 2)),
                (-1, Symbol::t(2, 2))
            ])
        );
        assert_eq!(
            eval_gu_closed(&Symbol::e(1, 5), &w(5)).unwrap(),
            FormalSum::single(Symbol::h(1, 0))
        );
        assert_eq!(
            eval_gu_closed(&Symbol::q(4, 1), &w3).unwrap(),
            sum(&[
                (1, Symbol::q(2, 0)),
                (1, Symbol::t(2, 1)),
                (-1, Symbol::t(2, 0)),
                (1, Symbol::t(3, 1)),
                (-1, Symbol::t(3, 0))
            ])
        );
        // negative degrees go through the m < 0 branch
        assert_eq!(
            eval_gu_closed(&Symbol::e(0, -1), &w3).unwrap(),
            sum(&[(-1, Symbol::h(2, 0)), (1, Symbol::t(3, 0)), (-1, Symbol::t(2, 0))])
        );
        assert_eq!(eval_gu_closed(&Symbol::e(1, 5), &w3), Err(ClosedFormError::OutOfWindow(Symbol::e(1, 5))));
        assert_eq!(eval_gu_closed(&Symbol::q(2, -3), &w3), Err(ClosedFormError::OutOfWindow(Symbol::q(2, -3))));
    }

    #[test]
    fn universal_group_small_windows() {
        for m in 1..=2 {
            let ug = universal_group(&w(m));
            assert_eq!(ug.group, expected_universal_group(&w(m)));
            assert!(ug.is_named_basis());
        }
    }

    #[test]
    fn empty_relations_give_free_group() {
        let ug = universal_group_from(&w(1), &[]);
        assert_eq!(ug.group, GroupSpec::free(33));
    }

    #[test]
    fn relations_vanish_in_quotient() {
        let ug = universal_group(&w(2));
        for r in raw_relation_instances(&w(2)) {
            assert!(ug.project(&r.sum).unwrap().is_zero(), "{}", r.sum);
        }
    }

    #[test]
    fn crosscheck_clean_and_mutated() {
        assert!(crosscheck_gu(&w(1)).passed());
        let forms = ClosedForms { mutation: Some(FormulaMutation::DropT2FromPositiveH2) };
        let rep = crosscheck_gu_with(&w(2), &forms);
        assert!(rep.violation_count() > 0);
        assert!(rep
            .relation_violations
            .iter()
            .any(|v| v.families.contains(&RelationTag::HT)));
    }
}
