//! JSON report for a single protocol run.

use qfeedback_core::{
    run_protocol, Efficiency, EnergyBlock, ProtocolConfig, ProtocolResult, Result,
};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct StageSummary {
    pub stage: String,
    #[serde(rename = "H_S")]
    pub h_system: f64,
    #[serde(rename = "H_A")]
    pub h_auxiliary: f64,
    #[serde(rename = "H_joint")]
    pub h_joint: f64,
    #[serde(rename = "I")]
    pub mutual_information: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerSummary {
    #[serde(rename = "dH_S")]
    pub dh_system: f64,
    #[serde(rename = "dH_A")]
    pub dh_auxiliary: f64,
    #[serde(rename = "Q_min")]
    pub q_min: f64,
    #[serde(rename = "Q_opt")]
    pub q_opt: f64,
    pub epsilon: Efficiency,
    #[serde(rename = "dSi_reset")]
    pub reset_entropy_production: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergySummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergySummary {
    #[serde(rename = "dE_S")]
    pub de_system: f64,
    #[serde(rename = "W")]
    pub work: f64,
    /// Keyed by stage name, in protocol order.
    #[serde(rename = "dF_A")]
    pub df_auxiliary: Vec<StageValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageValue {
    pub stage: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: ProtocolConfig,
    pub warnings: Vec<String>,
    pub stages: Vec<StageSummary>,
    pub ledger: LedgerSummary,
    pub gamma_final: f64,
    pub phi_used: f64,
}

impl From<&EnergyBlock> for EnergySummary {
    fn from(e: &EnergyBlock) -> Self {
        Self {
            de_system: e.de_system,
            work: e.work,
            df_auxiliary: e
                .df_auxiliary
                .iter()
                .map(|(s, v)| StageValue {
                    stage: s.to_string(),
                    value: *v,
                })
                .collect(),
        }
    }
}

impl From<&ProtocolResult> for RunReport {
    fn from(r: &ProtocolResult) -> Self {
        let l = &r.ledger;
        Self {
            config: r.config,
            warnings: r.warnings.iter().map(|w| w.to_string()).collect(),
            stages: r
                .stages
                .iter()
                .map(|s| StageSummary {
                    stage: s.stage.to_string(),
                    h_system: s.h_system,
                    h_auxiliary: s.h_auxiliary,
                    h_joint: s.h_joint,
                    mutual_information: s.mutual_information,
                })
                .collect(),
            ledger: LedgerSummary {
                dh_system: l.dh_system,
                dh_auxiliary: l.dh_auxiliary,
                q_min: l.q_min,
                q_opt: l.q_opt,
                epsilon: l.epsilon,
                reset_entropy_production: l.reset_entropy_production,
                energy: l.energy.as_ref().map(EnergySummary::from),
            },
            gamma_final: r.gamma_final,
            phi_used: r.phi_used,
        }
    }
}

pub fn run_report(config: &ProtocolConfig) -> Result<RunReport> {
    Ok(RunReport::from(&run_protocol(config)?))
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Per-stage entropy table.
    pub fn to_csv(&self) -> String {
        crate::csv::write_table(
            &["stage", "H_S", "H_A", "H_joint", "I"],
            self.stages.iter().map(|s| {
                vec![
                    s.stage.clone(),
                    crate::csv::float(s.h_system),
                    crate::csv::float(s.h_auxiliary),
                    crate::csv::float(s.h_joint),
                    crate::csv::float(s.mutual_information),
                ]
            }),
        )
    }
}
