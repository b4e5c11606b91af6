use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::abelian::{row_spans_equal, IntMatrix, RelationMatrix};
use crate::symbols::{DegreeWindow, Family, FormalSum, Symbol};

/// Where a relation row came from: one of the six local two-parameter
/// families, one of the two torsion constraints, or a bullet of the
/// simplified presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationTag {
    EH,
    TT,
    ET,
    HT,
    TQ,
    QQ,
    TorsionH1,
    TorsionQ2,
    Simplified(u8),
}

impl fmt::Display for RelationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationTag::TorsionH1 => write!(f, "TORSION-H1"),
            RelationTag::TorsionQ2 => write!(f, "TORSION-Q2"),
            RelationTag::Simplified(b) => write!(f, "SIMPLIFIED-{b}"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl std::str::FromStr for RelationTag {
    type Err = String;

    /// Accepts the six family names and `TORSION-H1`, `TORSION-Q2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "EH" => RelationTag::EH,
            "TT" => RelationTag::TT,
            "ET" => RelationTag::ET,
            "HT" => RelationTag::HT,
            "TQ" => RelationTag::TQ,
            "QQ" => RelationTag::QQ,
            "TORSION-H1" => RelationTag::TorsionH1,
            "TORSION-Q2" => RelationTag::TorsionQ2,
            _ => return Err(format!("unknown relation family {s:?}")),
        })
    }
}

impl Serialize for RelationTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parameters a family formula was instantiated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Provenance {
    pub family: RelationTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup: Option<u8>,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationInstance {
    pub sum: FormalSum,
    pub provenance: Vec<Provenance>,
}

impl RelationInstance {
    pub fn has_family(&self, tag: RelationTag) -> bool {
        self.provenance.iter().any(|p| p.family == tag)
    }
}

fn sym(family: Family, sup: u8, degree: i64) -> Symbol {
    Symbol::new(family, sup, degree).expect("family formulas stay inside the extended alphabet")
}

/// Collects normalized instances, keeping one row per distinct sum and
/// accumulating provenance.
struct Collector<'w> {
    window: &'w DegreeWindow,
    out: Vec<RelationInstance>,
    index: HashMap<FormalSum, usize>,
}

impl<'w> Collector<'w> {
    fn new(window: &'w DegreeWindow) -> Self {
        Collector { window, out: Vec::new(), index: HashMap::new() }
    }

    fn push(&mut self, family: RelationTag, sup: Option<u8>, degree: i64, terms: &[(i64, Symbol)]) {
        let sum = FormalSum::normalize(terms.iter().copied()).expect("extended alphabet");
        if sum.is_zero() || !sum.symbols().all(|s| self.window.contains(s)) {
            return;
        }
        let prov = Provenance { family, sup, degree };
        match self.index.get(&sum) {
            Some(&i) => self.out[i].provenance.push(prov),
            None => {
                self.index.insert(sum.clone(), self.out.len());
                self.out.push(RelationInstance { sum, provenance: vec![prov] });
            }
        }
    }

    /// Degrees wide enough that filtering by the window decides admission.
    fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        -self.window.size() - 1..=self.window.size() + 1
    }
}

/// Every instance of the local relation families plus the torsion
/// constraints whose canonical symbols all lie in `window`:
///
/// * EH: `E^a_m - H^a_m`, a in 0..=2
/// * TT: `T^a_m - T^(3-a)_m`, a in 0..=3
/// * ET: `T^a_m - T^(a+1)_m - E^a_(m-1) + E^a_m`, a in 0..=2
/// * HT: `-T^(a+1)_m + T^a_m - H^a_(m-1) + H^a_m`, a in 0..=2
/// * TQ: `Q^a_m - Q^(a+1)_m - T^a_(m-1) + T^a_m`, a in 0..=3
/// * QQ: `Q^2_m - Q^2_(m-1)`
/// * torsion: `2 H^1_m`, `2 Q^2_m`
pub fn raw_relation_instances(window: &DegreeWindow) -> Vec<RelationInstance> {
    use Family::*;
    let mut c = Collector::new(window);
    let degrees: Vec<i64> = c.degrees().collect();
    for &m in &degrees {
        for a in 0..=2 {
            c.push(RelationTag::EH, Some(a), m, &[(1, sym(E, a, m)), (-1, sym(H, a, m))]);
        }
    }
    for &m in &degrees {
        for a in 0..=3 {
            c.push(RelationTag::TT, Some(a), m, &[(1, sym(T, a, m)), (-1, sym(T, 3 - a, m))]);
        }
    }
    for &m in &degrees {
        for a in 0..=2 {
            c.push(
                RelationTag::ET,
                Some(a),
                m,
                &[(1, sym(T, a, m)), (-1, sym(T, a + 1, m)), (-1, sym(E, a, m - 1)), (1, sym(E, a, m))],
            );
        }
    }
    for &m in &degrees {
        for a in 0..=2 {
            c.push(
                RelationTag::HT,
                Some(a),
                m,
                &[(-1, sym(T, a + 1, m)), (1, sym(T, a, m)), (-1, sym(H, a, m - 1)), (1, sym(H, a, m))],
            );
        }
    }
    for &m in &degrees {
        for a in 0..=3 {
            c.push(
                RelationTag::TQ,
                Some(a),
                m,
                &[(1, sym(Q, a, m)), (-1, sym(Q, a + 1, m)), (-1, sym(T, a, m - 1)), (1, sym(T, a, m))],
            );
        }
    }
    for &m in &degrees {
        c.push(RelationTag::QQ, None, m, &[(1, sym(Q, 2, m)), (-1, sym(Q, 2, m - 1))]);
    }
    for &m in &degrees {
        c.push(RelationTag::TorsionH1, None, m, &[(2, sym(H, 1, m))]);
    }
    for &m in &degrees {
        c.push(RelationTag::TorsionQ2, None, m, &[(2, sym(Q, 2, m))]);
    }
    c.out
}

/// The simplified presentation, bullet by bullet:
///
/// 1. `E^2_m = -E^0_m = H^2_m`, `E^1_m = H^1_m`
/// 2. `T^0_m = T^3_m`, `T^1_m = T^2_m`
/// 3. `H^1_m = H^1_(m-1)`, `2 H^1_m = 0`
/// 4. `Q^2_m = Q^2_(m-1)`, `2 Q^2_m = 0`
/// 5. `H^2_m - H^2_(m-1) = T^3_m - T^2_m`
/// 6. `Q^4_m - Q^3_m = T^3_m - T^3_(m-1)`, `Q^3_m - Q^2_m = T^2_m - T^2_(m-1)`
pub fn simplified_relation_instances(window: &DegreeWindow) -> Vec<RelationInstance> {
    use Family::*;
    let b = RelationTag::Simplified;
    let mut c = Collector::new(window);
    let degrees: Vec<i64> = c.degrees().collect();
    for &m in &degrees {
        c.push(b(1), None, m, &[(1, sym(E, 2, m)), (-1, sym(H, 2, m))]);
        c.push(b(1), None, m, &[(1, sym(E, 0, m)), (1, sym(H, 2, m))]);
        c.push(b(1), None, m, &[(1, sym(E, 1, m)), (-1, sym(H, 1, m))]);
    }
    for &m in &degrees {
        c.push(b(2), None, m, &[(1, sym(T, 0, m)), (-1, sym(T, 3, m))]);
        c.push(b(2), None, m, &[(1, sym(T, 1, m)), (-1, sym(T, 2, m))]);
    }
    for &m in &degrees {
        c.push(b(3), None, m, &[(1, sym(H, 1, m)), (-1, sym(H, 1, m - 1))]);
        c.push(b(3), None, m, &[(2, sym(H, 1, m))]);
    }
    for &m in &degrees {
        c.push(b(4), None, m, &[(1, sym(Q, 2, m)), (-1, sym(Q, 2, m - 1))]);
        c.push(b(4), None, m, &[(2, sym(Q, 2, m))]);
    }
    for &m in &degrees {
        c.push(
            b(5),
            None,
            m,
            &[(1, sym(H, 2, m)), (-1, sym(H, 2, m - 1)), (-1, sym(T, 3, m)), (1, sym(T, 2, m))],
        );
    }
    for &m in &degrees {
        c.push(
            b(6),
            None,
            m,
            &[(1, sym(Q, 4, m)), (-1, sym(Q, 3, m)), (-1, sym(T, 3, m)), (1, sym(T, 3, m - 1))],
        );
        c.push(
            b(6),
            None,
            m,
            &[(1, sym(Q, 3, m)), (-1, sym(Q, 2, m)), (-1, sym(T, 2, m)), (1, sym(T, 2, m - 1))],
        );
    }
    c.out
}

/// Relation rows over the in-window symbols, columns in symbol order.
pub fn relation_matrix(instances: &[RelationInstance], window: &DegreeWindow) -> IntMatrix {
    let symbols = window.symbols();
    let col: HashMap<Symbol, usize> = symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let rows: Vec<Vec<BigInt>> = instances
        .iter()
        .map(|inst| {
            let mut row = vec![BigInt::from(0); symbols.len()];
            for (s, c) in inst.sum.terms() {
                row[col[s]] = BigInt::from(c);
            }
            row
        })
        .collect();
    IntMatrix::from_rows(symbols.len(), &rows)
}

/// Relation matrix in the JSON exchange format with symbol-string labels.
pub fn export_relations(instances: &[RelationInstance], window: &DegreeWindow) -> RelationMatrix {
    let labels = window.symbols().iter().map(ToString::to_string).collect();
    RelationMatrix::from_matrix(labels, &relation_matrix(instances, window)).expect("relation entries are small")
}

/// Whether two instance lists generate the same subgroup of the free module
/// on in-window symbols.
pub fn instance_spans_equal(a: &[RelationInstance], b: &[RelationInstance], window: &DegreeWindow) -> bool {
    row_spans_equal(&relation_matrix(a, window), &relation_matrix(b, window))
}

/// Raw and simplified relation sets span the same lattice.
pub fn spans_equivalent(window: &DegreeWindow) -> bool {
    instance_spans_equal(&raw_relation_instances(window), &simplified_relation_instances(window), window)
}

/// Raw instances with every row produced by `family` removed.
pub fn raw_relations_without(window: &DegreeWindow, family: RelationTag) -> Vec<RelationInstance> {
    raw_relation_instances(window).into_iter().filter(|r| !r.has_family(family)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: i64) -> DegreeWindow {
        DegreeWindow::new(m).unwrap()
    }

    fn find(instances: &[RelationInstance], tag: RelationTag, sup: Option<u8>, m: i64) -> &FormalSum {
        &instances
            .iter()
            .find(|r| r.provenance.iter().any(|p| p.family == tag && p.sup == sup && p.degree == m))
            .unwrap_or_else(|| panic!("no {tag} a={sup:?} m={m}"))
            .sum
    }

    fn sum(terms: &[(i64, Symbol)]) -> FormalSum {
        FormalSum::normalize(terms.iter().copied()).unwrap()
    }

    #[test]
    fn raw_examples() {
        let raw = raw_relation_instances(&w(1));
        assert_eq!(
            find(&raw, RelationTag::ET, Some(2), 0),
            &sum(&[(1, Symbol::t(2, 0)), (-1, Symbol::t(3, 0)), (-1, Symbol::e(2, -1)), (1, Symbol::e(2, 0))])
        );
        assert_eq!(
            find(&raw, RelationTag::HT, Some(1), 1),
            &sum(&[(-1, Symbol::t(2, 1)), (1, Symbol::t(1, 1)), (-1, Symbol::h(1, 0)), (1, Symbol::h(1, 1))])
        );
        assert_eq!(find(&raw, RelationTag::QQ, None, 1), &sum(&[(1, Symbol::q(2, 1)), (-1, Symbol::q(2, 0))]));
        // HT with a=0 goes through H^0 = -H^2
        assert_eq!(
            find(&raw, RelationTag::HT, Some(0), 0),
            &sum(&[(-1, Symbol::t(1, 0)), (1, Symbol::t(0, 0)), (1, Symbol::h(2, -1)), (-1, Symbol::h(2, 0))])
        );
    }

    #[test]
    fn window_admission() {
        let raw = raw_relation_instances(&w(1));
        for r in &raw {
            assert!(r.sum.symbols().all(|s| w(1).contains(s)), "{}", r.sum);
        }
        // QQ only at m = 1 when Q degrees are {0, 1}
        let qq: Vec<_> = raw.iter().filter(|r| r.has_family(RelationTag::QQ)).collect();
        assert_eq!(qq.len(), 1);
        // TQ needs T at m-1, so m ranges over the Q window
        assert!(raw.iter().filter(|r| r.has_family(RelationTag::TQ)).all(|r| r.provenance[0].degree >= 0));
    }

    #[test]
    fn simplified_examples() {
        let s = simplified_relation_instances(&w(1));
        let has = |x: FormalSum| s.iter().any(|r| r.sum == x);
        assert!(has(sum(&[(1, Symbol::e(2, 0)), (-1, Symbol::h(2, 0))])));
        assert!(has(sum(&[(1, Symbol::e(0, 0)), (1, Symbol::h(2, 0))])));
        assert!(has(sum(&[(1, Symbol::h(1, 1)), (-1, Symbol::h(1, 0))])));
        assert!(has(sum(&[(2, Symbol::h(1, 1))])));
        assert!(has(sum(&[(1, Symbol::h(2, 0)), (-1, Symbol::h(2, -1)), (-1, Symbol::t(3, 0)), (1, Symbol::t(2, 0))])));
    }

    #[test]
    fn spans_match() {
        assert!(spans_equivalent(&w(1)));
        assert!(spans_equivalent(&w(2)));
        let no_qq = raw_relations_without(&w(2), RelationTag::QQ);
        assert!(!instance_spans_equal(&no_qq, &simplified_relation_instances(&w(2)), &w(2)));
    }

    #[test]
    fn export_labels() {
        let rm = export_relations(&raw_relation_instances(&w(1)), &w(1));
        assert_eq!(rm.cols.len(), 33);
        assert_eq!(rm.cols[0], "E^0_-1");
        assert_eq!(rm.to_matrix().unwrap(), relation_matrix(&raw_relation_instances(&w(1)), &w(1)));
    }
}
