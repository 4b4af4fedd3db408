pub mod bounds;
pub mod error;
pub mod group_spec;
pub mod homcount;
pub mod homo;
pub mod oracle;
pub mod perm;
pub mod pi1;
pub mod presentation;
pub mod scheme;
pub mod tietze;
pub mod vk;
pub mod word;

pub use bounds::Bounds;
pub use error::{Error, Result};
pub use group_spec::{GroupKind, GroupSpec};
pub use homcount::{
    count_homs, count_homs_with, count_transitive_homs, count_transitive_homs_with, HomSpace,
};
pub use homo::{Evidence, Homo, Validity};
pub use oracle::{
    compare, connected_count, enumerate_descent_data, first_failure, for_each_descent_datum,
    groupoid_cardinality, ConnectedComparison, DescentDatum, Fraction, OracleReport, Verdict,
};
pub use pi1::{
    class_witness, lower, pi1_closed_form, pi1_connected_singular, pi1_devissage, DerivationStep,
    GroupRef, LegMap, NoohiExpression, Pi1Options, Pi1Result, VkLegExpr, WitnessStep,
};
pub use presentation::{
    coproduct, fibered_coproduct, free_product, quotient_by_relations, Presentation,
};
pub use scheme::{
    build_t, build_t_complement, devissage_order, free_rank, intersection, BaseStep, Branch,
    Component, Diagnostic, IntersectionReport, Plan, PlanStep, SchemeConfig, Singular, SubConfig,
    SubKind,
};
pub use tietze::{tietze_simplify, tietze_simplify_tracked, Simplified};
pub use vk::{
    build_f, verify_copy_lemma, verify_vk_forms, vk_build, FreeF, LegSpec, VkData, VkForm, VkGroup,
    VkLeg, VkReport,
};
pub use word::{GeneratorSymbol, Word};
