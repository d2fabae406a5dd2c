//! Bundled reference datasets.

use crate::sample::Sample;

/// Frequency table of a size-100 sample simulated from a beta-geometric
/// distribution with pi = 0.4, theta = 0.125 (n = 100, t = 182).
pub const BETAGEO_N100: &[(u64, u64)] = &[
    (0, 42),
    (1, 24),
    (2, 11),
    (3, 8),
    (4, 4),
    (5, 4),
    (7, 1),
    (9, 2),
    (10, 2),
    (15, 1),
    (16, 1),
];

/// Frequency table of a size-50 sample simulated from a type I discrete
/// Weibull distribution with q = 0.8, beta = 1.4 (n = 50, t = 89).
pub const DWEIBULL_N50: &[(u64, u64)] = &[
    (0, 13),
    (1, 14),
    (2, 10),
    (3, 8),
    (4, 1),
    (5, 1),
    (7, 2),
    (8, 1),
];

/// Numbers of inspections between discoveries of defects in an industrial
/// process, shifted down by one so the support starts at zero (n = 28,
/// t = 175).
///
/// The source table lists the eighteen values below 5 and states that ten
/// observations are >= 5, but prints only nine of them (6, 8, 10, 12, 13,
/// 16, 17, 25, 28). The missing tenth value is reconstructed as 13: the
/// reported geometric fit p = 0.1378 pins the total at t = 175, and
/// 175 - 27 - 135 = 13.
pub const INSPECTION: &[(u64, u64)] = &[
    (0, 6),
    (1, 4),
    (2, 3),
    (3, 3),
    (4, 2),
    (6, 1),
    (8, 1),
    (10, 1),
    (12, 1),
    (13, 2),
    (16, 1),
    (17, 1),
    (25, 1),
    (28, 1),
];

/// Look up a bundled dataset by its fixture name.
pub fn fixture(name: &str) -> Option<Sample> {
    let rows = match name {
        "betageo_n100" => BETAGEO_N100,
        "dweibull_n50" => DWEIBULL_N50,
        "inspection" => INSPECTION,
        _ => return None,
    };
    Some(Sample::from_counts(rows).expect("bundled datasets are non-empty"))
}

/// Names of all bundled datasets.
pub const FIXTURE_NAMES: &[&str] = &["betageo_n100", "dweibull_n50", "inspection"];
