//! Bundled example domains, one or more per classification case.

use crate::convexlog::LogDomainModel;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// `(name, JSON source)` of every bundled model.
        pub const SOURCES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../models/", $name, ".json"))),)*
        ];
    };
}

bundled!(
    "coeure_loeb",
    "hyperbolic_a_over_t",
    "model4",
    "model5",
    "model6",
    "parabolic_k1",
    "parabolic_k2",
    "parabolic_k3",
    "bounded_origin",
    "t1_compact",
    "t0_compact",
    "half_strip",
);

/// Parses a bundled model by name.
pub fn get(name: &str) -> Option<LogDomainModel> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| serde_json::from_str(src).expect("bundled models parse"))
}

/// All bundled models in declaration order.
pub fn all() -> Vec<(&'static str, LogDomainModel)> {
    SOURCES.iter().map(|(n, _)| (*n, get(n).expect("listed"))).collect()
}
