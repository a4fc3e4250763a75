//! Loop fixtures shared by the benchmarks under `benches/`.

/// `(name, source)` pairs spanning the decision backends.
pub const FIXTURES: &[(&str, &str)] = &[
    ("count_up", include_str!("../../core/corpus/count_up.loop")),
    ("negate", include_str!("../../core/corpus/negate.loop")),
    ("jordan3_up", include_str!("../../core/corpus/jordan3_up.loop")),
    ("pell", include_str!("../../core/corpus/pell.loop")),
    ("cubic_real_opposed", include_str!("../../core/corpus/cubic_real_opposed.loop")),
    ("rotation", include_str!("../../core/corpus/rotation.loop")),
    ("rotation_growth_equal", include_str!("../../core/corpus/rotation_growth_equal.loop")),
];
