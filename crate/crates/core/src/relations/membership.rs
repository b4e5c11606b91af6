use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::families::{raw_relation_instances, RelationInstance, RelationTag};
use super::universal::universal_group;
use crate::abelian::{enumerate_homs, GroupElement, GroupError, GroupSpec};
use crate::symbols::{Configuration, DegreeWindow, Family, Symbol};

/// Witnesses kept in a report; counts are always exact.
const MAX_WITNESSES: usize = 100;

/// A function on in-window order-`n` configurations with values in `group`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    pub order: usize,
    pub window: DegreeWindow,
    pub group: GroupSpec,
    pub values: BTreeMap<Configuration, GroupElement>,
}

impl InvariantTable {
    pub fn get(&self, c: &Configuration) -> Option<&GroupElement> {
        self.values.get(c)
    }

    /// Builds a table from a value function on every in-window configuration.
    pub fn from_fn<F>(order: usize, window: DegreeWindow, group: GroupSpec, mut f: F) -> Self
    where
        F: FnMut(&Configuration) -> GroupElement,
    {
        let values = window.configurations(order).into_iter().map(|c| {
            let v = f(&c);
            (c, v)
        });
        InvariantTable { order, window, group, values: values.collect() }
    }
}

impl Serialize for InvariantTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.values.values())
    }
}

/// `φ ∘ g_U` on the in-window order-one configurations, one table per
/// homomorphism `φ: G_U -> G`.
pub fn delta1_tables(target: &GroupSpec, window: &DegreeWindow) -> Result<Vec<InvariantTable>, GroupError> {
    let ug = universal_group(window);
    let homs = enumerate_homs(&ug.group, target)?;
    Ok(homs
        .iter()
        .map(|phi| {
            InvariantTable::from_fn(1, *window, target.clone(), |c| {
                phi.apply(ug.image(&c.symbols()[0]).expect("in-window symbol"))
            })
        })
        .collect())
}

/// 1 iff every symbol of the configuration is a quadruple point.
pub fn section_e_g(c: &Configuration) -> u8 {
    u8::from(c.symbols().iter().all(|s| s.family() == Family::Q))
}

/// [`section_e_g`] as a `Z/2`-valued table on order-`n` configurations.
pub fn section_e_table(order: usize, window: &DegreeWindow) -> InvariantTable {
    let z2 = GroupSpec::cyclic(2);
    InvariantTable::from_fn(order, *window, z2.clone(), |c| {
        z2.element(vec![BigInt::from(section_e_g(c))]).expect("one coordinate")
    })
}

/// Which `(n-1)`-symbol contexts to lift relations to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextSelection {
    Full,
    /// `count` distinct contexts drawn with a seeded generator (all of them
    /// when `count` is at least the number available), kept in sorted order.
    Sample { count: usize, seed: u64 },
}

/// Single-symbol relations lifted to order `n` by every context of `n - 1`
/// additional symbols.
#[derive(Clone, Debug)]
pub struct DeltaNRelations {
    pub order: usize,
    pub relations: Vec<RelationInstance>,
    pub contexts: Vec<Vec<Symbol>>,
}

/// One relation `Σ c_i g([s_i, context...]) = 0`.
#[derive(Clone, Copy, Debug)]
pub struct LiftedRelation<'a> {
    pub relation: &'a RelationInstance,
    pub context: &'a [Symbol],
}

impl LiftedRelation<'_> {
    pub fn terms(&self) -> Vec<(i64, Configuration)> {
        self.relation
            .sum
            .terms()
            .map(|(s, c)| {
                let mut v = self.context.to_vec();
                v.push(*s);
                (c, Configuration::new(v).expect("canonical symbols"))
            })
            .collect()
    }
}

impl DeltaNRelations {
    pub fn len(&self) -> usize {
        self.relations.len() * self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = LiftedRelation<'_>> + '_ {
        self.relations
            .iter()
            .flat_map(move |r| self.contexts.iter().map(move |c| LiftedRelation { relation: r, context: c }))
    }
}

pub fn delta_n_relations(order: usize, window: &DegreeWindow, selection: ContextSelection) -> DeltaNRelations {
    assert!(order >= 1, "order must be at least 1");
    let mut contexts: Vec<Vec<Symbol>> = if order == 1 {
        vec![Vec::new()]
    } else {
        window.configurations(order - 1).into_iter().map(|c| c.symbols().to_vec()).collect()
    };
    if let ContextSelection::Sample { count, seed } = selection {
        if count < contexts.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = rand::seq::index::sample(&mut rng, contexts.len(), count).into_vec();
            picked.sort_unstable();
            contexts = picked.into_iter().map(|i| std::mem::take(&mut contexts[i])).collect();
        }
    }
    DeltaNRelations { order, relations: raw_relation_instances(window), contexts }
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipViolation {
    pub relation: String,
    pub families: Vec<RelationTag>,
    pub context: Vec<Symbol>,
    pub value: GroupElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub order: usize,
    pub window: i64,
    pub contexts: usize,
    pub relations_checked: usize,
    pub violation_count: usize,
    pub violations: Vec<MembershipViolation>,
    pub missing_count: usize,
    pub missing: Vec<Configuration>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.missing_count == 0
    }
}

/// Evaluates every lifted relation on `table`; the report is clean iff the
/// table satisfies all of them on the window.
pub fn check_membership(table: &InvariantTable, selection: ContextSelection) -> MembershipReport {
    let rels = delta_n_relations(table.order, &table.window, selection);
    let g = &table.group;
    let mut report = MembershipReport {
        order: table.order,
        window: table.window.size(),
        contexts: rels.contexts.len(),
        relations_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
        missing_count: 0,
        missing: Vec::new(),
    };
    for lifted in rels.iter() {
        report.relations_checked += 1;
        let mut acc = g.zero();
        let mut complete = true;
        for (c, conf) in lifted.terms() {
            match table.get(&conf) {
                Some(v) => acc = g.add(&acc, &g.scale(&BigInt::from(c), v)),
                None => {
                    complete = false;
                    report.missing_count += 1;
                    if report.missing.len() < MAX_WITNESSES {
                        report.missing.push(conf);
                    }
                }
            }
        }
        if complete && !acc.is_zero() {
            report.violation_count += 1;
            if report.violations.len() < MAX_WITNESSES {
                report.violations.push(MembershipViolation {
                    relation: lifted.relation.sum.to_string(),
                    families: lifted.relation.provenance.iter().map(|p| p.family).collect(),
                    context: lifted.context.to_vec(),
                    value: acc,
                });
            }
        }
    }
    report
}
