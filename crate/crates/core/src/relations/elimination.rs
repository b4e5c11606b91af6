//! Universal group by substitution, without normal forms.
//!
//! Symbols are eliminated in stages E, then T^0 and T^1, then H^1, H^2,
//! Q^2, Q^3, Q^4, each time using a relation in which the symbol has
//! coefficient ±1. The named generators are never eliminated. What is left
//! must be relations of the form `c x` on single survivors, which read off
//! the group directly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::families::raw_relation_instances;
use super::universal::named_generator_symbols;
use crate::abelian::GroupSpec;
use crate::symbols::{DegreeWindow, Family, FormalSum, Symbol};

#[derive(Clone, Debug, Serialize)]
pub struct EliminationOutcome {
    /// `None` when the residual relations are not all single-term.
    pub group: Option<GroupSpec>,
    pub eliminated: usize,
    pub survivors: Vec<Symbol>,
    pub residual: Vec<FormalSum>,
}

const STAGES: [(Family, &[u8]); 7] = [
    (Family::E, &[0, 1, 2]),
    (Family::T, &[0, 1]),
    (Family::H, &[1]),
    (Family::H, &[2]),
    (Family::Q, &[2]),
    (Family::Q, &[3]),
    (Family::Q, &[4]),
];

pub fn hand_elimination(window: &DegreeWindow) -> EliminationOutcome {
    let protected: BTreeSet<Symbol> = named_generator_symbols(window).into_iter().collect();
    let mut relations: Vec<FormalSum> = raw_relation_instances(window).into_iter().map(|r| r.sum).collect();
    let mut alive: BTreeSet<Symbol> = window.symbols().into_iter().collect();
    let mut eliminated = 0;

    for (family, supers) in STAGES {
        let in_stage = |s: &Symbol| s.family() == family && supers.contains(&s.sup()) && !protected.contains(s);
        while let Some((ri, x, u)) = find_unit_pivot(&relations, &in_stage) {
            let pivot = relations.swap_remove(ri);
            for r in relations.iter_mut() {
                let c = r.coeff(&x);
                if c != 0 {
                    r.add_scaled(-c * u, &pivot);
                }
            }
            relations.retain(|r| !r.is_zero());
            alive.remove(&x);
            eliminated += 1;
        }
    }

    // Fold single-term relations into per-symbol orders, reduce the others
    // modulo those orders, and repeat until nothing changes.
    let mut orders: BTreeMap<Symbol, i64> = BTreeMap::new();
    loop {
        let mut changed = false;
        for r in &relations {
            let terms: Vec<(&Symbol, i64)> = r.terms().collect();
            if let [(s, c)] = terms[..] {
                let e = orders.entry(*s).or_insert(0);
                let g = e.gcd(&c);
                changed |= g != *e;
                *e = g;
            }
        }
        let reduced: Vec<FormalSum> = relations
            .iter()
            .map(|r| {
                if r.len() == 1 {
                    return r.clone();
                }
                let pairs = r.terms().map(|(s, c)| match orders.get(s) {
                    Some(&o) if o != 0 => (c.rem_euclid(o), *s),
                    _ => (c, *s),
                });
                FormalSum::normalize(pairs).expect("canonical symbols")
            })
            .filter(|r| !r.is_zero())
            .collect();
        changed |= reduced != relations;
        relations = reduced;
        if !changed {
            break;
        }
    }
    let single_term = relations.iter().all(|r| r.len() == 1);
    if single_term {
        relations = orders.iter().filter(|(_, &o)| o != 0).map(|(s, &o)| FormalSum::normalize([(o.abs(), *s)]).expect("canonical")).collect();
    }
    relations.sort_by_key(|r| r.to_string());
    relations.dedup();
    let group = single_term.then(|| {
        let cyclic: Vec<BigInt> = alive.iter().map(|s| BigInt::from(orders.get(s).copied().unwrap_or(0))).collect();
        GroupSpec::from_cyclic_orders(&cyclic)
    });
    EliminationOutcome { group, eliminated, survivors: alive.into_iter().collect(), residual: relations }
}

fn find_unit_pivot<F: Fn(&Symbol) -> bool>(relations: &[FormalSum], eligible: &F) -> Option<(usize, Symbol, i64)> {
    relations.iter().enumerate().find_map(|(i, r)| {
        r.terms().find(|(s, c)| c.abs() == 1 && eligible(s)).map(|(s, c)| (i, *s, c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::expected_universal_group;

    #[test]
    fn elimination_reaches_named_generators() {
        for m in 1..=3 {
            let w = DegreeWindow::new(m).unwrap();
            let out = hand_elimination(&w);
            assert_eq!(out.group.as_ref(), Some(&expected_universal_group(&w)), "M={m}: {:?}", out.residual);
            let named: BTreeSet<Symbol> = named_generator_symbols(&w).into_iter().collect();
            assert_eq!(out.survivors.iter().copied().collect::<BTreeSet<_>>(), named);
            let residual: Vec<String> = out.residual.iter().map(|r| r.to_string()).collect();
            assert_eq!(residual, vec!["2H^1_0", "2Q^2_0"]);
        }
    }
}
