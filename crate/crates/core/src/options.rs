/// Tunable limits shared by the whole pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Options {
    /// Sup-norm bound of the exhaustive relation search.
    pub search_bound: i64,
    /// Largest splitting-field degree attempted.
    pub degree_cap: usize,
    /// Ceiling for working precision in bits.
    pub max_precision: u32,
    /// Largest power `d` accepted for `A^d`.
    pub max_power: u32,
    /// Extension degrees probed for geometric simplicity.
    pub probe_bound: u32,
}

/// Environment variable overriding the default precision ceiling.
pub const PRECISION_ENV: &str = "WEILMOT_MAX_PRECISION";

impl Default for Options {
    fn default() -> Self {
        Options { search_bound: 4, degree_cap: 48, max_precision: 4096, max_power: 6, probe_bound: 12 }
    }
}

impl Options {
    /// Defaults, with the precision ceiling taken from the environment when set.
    pub fn from_env() -> Self {
        let mut o = Options::default();
        if let Some(p) = std::env::var(PRECISION_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            o.max_precision = p;
        }
        o
    }
}
