//! Relation families defining the spaces of admissible order-n functions,
//! the truncated universal group for order one, and membership checks.

mod elimination;
mod families;
mod membership;
mod universal;

pub use elimination::{hand_elimination, EliminationOutcome};
pub use families::{
    export_relations, instance_spans_equal, raw_relation_instances, raw_relations_without, relation_matrix,
    simplified_relation_instances, spans_equivalent, Provenance, RelationInstance, RelationTag,
};
pub use membership::{
    check_membership, delta1_tables, delta_n_relations, section_e_g, section_e_table, ContextSelection,
    DeltaNRelations, InvariantTable, LiftedRelation, MembershipReport, MembershipViolation,
};
pub use universal::{
    crosscheck_gu, crosscheck_gu_with, eval_gu_closed, expected_universal_group, named_generator_symbols,
    reduce_in_presentation, universal_group, universal_group_from, ClosedFormError, ClosedForms, CrosscheckReport,
    FormulaMutation, RelationViolation, SymbolViolation, UniversalGroupResult,
};
