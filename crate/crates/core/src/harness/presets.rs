//! Compiled-in scenarios, keyed `tableN_panelX`.

use super::config::{AlphaSpec, DgpConfig, EstimatorSpec, MetaSpec, PolicyConfig, ScenarioConfig};
use crate::dgp::canonical::CesInputConvention;
use crate::dgp::markdown::{DensityScale, ExcessEmployment, LocalMinWageConfig};
use crate::estimators::{
    AmsMedian, CrossIvDirection, Design, EffectiveIv, EffectiveMwOptions, Intensity, Outcome, WageQuantile,
};
use crate::sampler::SkillShareMeta;

use WageQuantile::{P10, P25, P50, P90};

pub const DEFAULT_SEED: u64 = 20_240_611;

/// Tables that `reproduce` knows about, in display order.
pub const TABLES: &[&str] = &["1", "2", "3", "4", "5", "6", "7", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11"];

fn markdown(m: f64, height: f64, base: f64, meta: &str) -> DgpConfig {
    DgpConfig::NormalMarkdown {
        markdown: m,
        pos_height: height,
        pos_base: base,
        density: DensityScale::Proper,
        excess_employment: if height > 0.0 { ExcessEmployment::Allow } else { ExcessEmployment::Reject },
        meta: MetaSpec::Named(meta.into()),
    }
}

fn canonical(elasticity: f64) -> DgpConfig {
    DgpConfig::Canonical {
        elasticity,
        dispersion: 0.5,
        skill_shares: SkillShareMeta::default(),
        alpha: AlphaSpec::Calibrate { at_mw: -2.2, target_premium: 0.5 },
        convention: CesInputConvention::PriceWeighted,
    }
}

fn gaps50() -> Vec<Outcome> {
    Outcome::gaps_against(P50, &[P10, P25, P90])
}

fn scenario(name: &str, panel: &str, dgp: DgpConfig, mw: (f64, f64), outcomes: Vec<Outcome>, estimators: Vec<Design>) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        panel: panel.into(),
        dgp,
        policy: PolicyConfig { mw0: mw.0, mw1: mw.1, placebo_mw1: None, local: None },
        outcomes,
        estimators: estimators.into_iter().map(EstimatorSpec::new).collect(),
        regions: 200,
        replications: 1000,
        seed: DEFAULT_SEED,
    }
}

fn eff(region_fe: bool, time_fe: bool, deflator: WageQuantile, iv: EffectiveIv) -> Design {
    Design::EffectiveMw(EffectiveMwOptions { region_fe, time_fe, deflator, iv, ams_median: AmsMedian::TwoPeriodAverage })
}

fn eff_both() -> Design {
    eff(true, true, P50, EffectiveIv::None)
}

const EFF_PANELS: [(&str, &str, &str, f64); 4] = [
    ("A", "Regions differ only in location", "eff-location-only", -0.8),
    ("B", "Regions differ in location and dispersion", "eff-baseline", -0.8),
    ("C", "As above, but larger increase in min. wage", "eff-baseline", -0.6),
    ("D", "St. dev. of dispersion is 50% larger", "eff-wide-dispersion", -0.8),
];

/// Tables 1, A3 and A4 share panels and differ in the markdown and the
/// positive-employment block.
fn effective_family(table: &str, m: f64, height: f64) -> Vec<ScenarioConfig> {
    EFF_PANELS
        .iter()
        .map(|&(p, caption, meta, mw1)| {
            scenario(
                &format!("table{table}_panel{p}"),
                &format!("Panel {p}: {caption}"),
                markdown(m, height, 0.25, meta),
                (-1.0, mw1),
                gaps50(),
                vec![eff_both()],
            )
        })
        .collect()
}

const FA_PANELS: [(&str, &str, f64, f64); 4] = [
    ("A", "Small initial min. wage, truncation/censoring only", -1.1, 0.0),
    ("B", "Large initial min. wage, truncation/censoring only", -0.7, 0.0),
    ("C", "Small initial min. wage, positive emp. effects", -1.1, 1.4),
    ("D", "Large initial min. wage, positive emp. effects", -0.7, 1.4),
];

/// Tables 6 and A5 to A7: time-invariant locations, different designs.
fn intensity_family(table: &str, designs: Vec<Design>) -> Vec<ScenarioConfig> {
    FA_PANELS
        .iter()
        .map(|&(p, caption, mw0, height)| {
            scenario(
                &format!("table{table}_panel{p}"),
                &format!("Panel {p}: {caption}"),
                markdown(0.7, height, 0.25, "fa-permanent-location"),
                (mw0, mw0 + 0.2),
                Outcome::levels(),
                designs.clone(),
            )
        })
        .collect()
}

const STABILITY_PANELS: [(&str, &str, &str); 4] = [
    ("A", "Only permanent differences in location", "fa-permanent-location"),
    ("B", "Adding location shocks, stable distributions", "fa-location-shocks"),
    ("C", "Adding dispersion differences and shocks, stable distributions", "fa-dispersion-shocks"),
    ("D", "Average dispersion falls over time", "fa-dispersion-falls"),
];

/// Tables 7, A8 and A9.
fn stability_family(table: &str, design: Design, placebo: bool) -> Vec<ScenarioConfig> {
    STABILITY_PANELS
        .iter()
        .map(|&(p, caption, meta)| {
            let mw1 = if placebo { -1.0 } else { -0.8 };
            let mut s = scenario(
                &format!("table{table}_panel{p}"),
                &format!("Panel {p}: {caption}"),
                markdown(0.7, 0.0, 0.25, meta),
                (-1.0, mw1),
                Outcome::levels(),
                vec![design],
            );
            if placebo {
                s.policy.placebo_mw1 = Some(-0.8);
            }
            s
        })
        .collect()
}

const CANONICAL_PANELS: [(&str, &str, f64, f64); 6] = [
    ("A", "Initial minimum wage is low, elast. subs. is 3.0", -2.2, 3.0),
    ("B", "Initial minimum wage is low, elast. subs. is 1.4", -2.2, 1.4),
    ("C", "Initial minimum wage is high, elast. subs. is 3.0", -1.8, 3.0),
    ("D", "Initial minimum wage is high, elast. subs. is 1.4", -1.8, 1.4),
    ("E", "Initial minimum wage is very high, elast. subs. is 3.0", -1.5, 3.0),
    ("F", "Initial minimum wage is very high, elast. subs. is 1.4", -1.5, 1.4),
];

fn canonical_family(table: &str, outcomes: Vec<Outcome>, designs: Vec<Design>) -> Vec<ScenarioConfig> {
    CANONICAL_PANELS
        .iter()
        .map(|&(p, caption, mw0, e)| {
            scenario(
                &format!("table{table}_panel{p}"),
                &format!("Panel {p}: {caption}"),
                canonical(e),
                (mw0, mw0 + 0.2),
                outcomes.clone(),
                designs.clone(),
            )
        })
        .collect()
}

/// Every scenario belonging to one table, or `None` for an unknown table id.
pub fn table_presets(table: &str) -> Option<Vec<ScenarioConfig>> {
    let table = table.trim().to_ascii_uppercase();
    let table = table.strip_prefix("TABLE").unwrap_or(&table).to_string();
    let presets = match table.as_str() {
        "1" => effective_family("1", 0.7, 0.0),
        "A3" => effective_family("A3", 0.65, 0.5),
        "A4" => effective_family("A4", 0.6, 1.0),
        "2" => [
            ("A", "No correlation between location and dispersion", "eff-baseline"),
            ("B", "Contemporaneous correlation of 0.076", "eff-contemporaneous"),
            ("C", "Full correlation matrix in US data", "eff-us-full"),
        ]
        .iter()
        .map(|&(p, caption, meta)| {
            scenario(
                &format!("table2_panel{p}"),
                &format!("Panel {p}: {caption}"),
                markdown(0.7, 0.0, 0.25, meta),
                (-1.0, -0.8),
                gaps50(),
                vec![eff_both()],
            )
        })
        .collect(),
        "3" => vec![scenario(
            "table3_panelA",
            "Alternative fixed effects specifications",
            markdown(0.7, 0.0, 0.25, "eff-baseline"),
            (-1.0, -0.8),
            gaps50(),
            vec![eff_both(), eff(false, true, P50, EffectiveIv::None), eff(true, false, P50, EffectiveIv::None)],
        )],
        "4" => vec![scenario(
            "table4_panelA",
            "Percentile 90 as the deflator",
            markdown(0.7, 0.0, 0.25, "eff-baseline"),
            (-1.0, -0.8),
            Outcome::gaps_against(P90, &[P10, P25, P90]),
            vec![eff(true, true, P90, EffectiveIv::None)],
        )],
        "5" => {
            let dgp = || markdown(0.7, 0.0, 0.25, "eff-contemporaneous");
            let all = vec![
                eff_both(),
                eff(true, true, P50, EffectiveIv::TwoInstruments),
                eff(true, true, P50, EffectiveIv::Ams),
            ];
            let a = scenario("table5_panelA", "Panel A: No regional variation in minimum wage.", dgp(), (-1.0, -0.8), gaps50(), vec![eff_both()]);
            let mut panels = vec![a];
            for (p, caption, share) in [("B", "20% of regions with local min. wage", 0.2), ("C", "40% of regions with local min. wage", 0.4)] {
                let mut s = scenario(&format!("table5_panel{p}"), &format!("Panel {p}: {caption}"), dgp(), (-1.0, -0.8), gaps50(), all.clone());
                s.policy.local = Some(LocalMinWageConfig::with_share(share));
                panels.push(s);
            }
            panels
        }
        "6" => intensity_family("6", vec![Design::FractionAffected, Design::Gap]),
        "A5" => intensity_family(
            "A5",
            vec![Design::Binary { treated_share: 0.5 }, Design::Binary { treated_share: 0.9 }],
        ),
        "A6" => intensity_family(
            "A6",
            vec![
                Design::CrossIv { direction: CrossIvDirection::FaByGap },
                Design::CrossIv { direction: CrossIvDirection::GapByFa },
            ],
        ),
        "A7" => intensity_family(
            "A7",
            vec![
                Design::Quadratic { intensity: Intensity::FractionAffected },
                Design::Quadratic { intensity: Intensity::Gap },
            ],
        ),
        "7" => stability_family("7", Design::Gap, false),
        "A8" => stability_family("A8", Design::FractionAffected, false),
        "A9" => stability_family("A9", Design::Gap, true),
        "A10" => canonical_family("A10", Outcome::levels(), vec![Design::FractionAffected, Design::Gap]),
        "A11" => canonical_family("A11", gaps50(), vec![eff_both(), eff(false, true, P50, EffectiveIv::None)]),
        _ => return None,
    };
    Some(presets)
}

pub fn all_presets() -> Vec<ScenarioConfig> {
    TABLES.iter().flat_map(|t| table_presets(t).unwrap_or_default()).collect()
}

pub fn preset(name: &str) -> Option<ScenarioConfig> {
    all_presets().into_iter().find(|s| s.name.eq_ignore_ascii_case(name))
}
