use chrono::{Days, NaiveDate, NaiveTime};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::data::Cell;
use crate::error::{Error, Result};
use crate::featurize::{DoseTable, DIAGNOSIS_GROUPS, WARD_NAMES};
use crate::synth::bundle::*;

/// Generator settings.
///
/// `bias_strength` in [0, 1] controls how strongly gender influences the
/// generated data. It shifts the future-administration rate directly, scales
/// the incident rate by gender (and incidents in turn raise the
/// future-administration rate, a mediated bias path the classifiers can see),
/// and skews two diagnosis-group frequencies as pure gender proxies. At 0 the
/// generation is gender-blind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_patients: usize,
    pub mean_admissions_per_patient: f64,
    pub p_emergency: f64,
    pub base_benzo_rate: f64,
    pub bias_strength: f64,
    pub date_range: (NaiveDate, NaiveDate),
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            n_patients: 3000,
            mean_admissions_per_patient: 1.3,
            p_emergency: 0.3,
            base_benzo_rate: 0.6,
            bias_strength: 0.5,
            date_range: (
                NaiveDate::from_ymd_opt(2011, 6, 1).unwrap(),
                NaiveDate::from_ymd_opt(2021, 5, 1).unwrap(),
            ),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_patients == 0 {
            return Err(Error::Config("n_patients must be positive".into()));
        }
        if self.mean_admissions_per_patient < 1.0 {
            return Err(Error::Config("mean_admissions_per_patient must be >= 1".into()));
        }
        for (name, p) in [
            ("p_emergency", self.p_emergency),
            ("base_benzo_rate", self.base_benzo_rate),
            ("bias_strength", self.bias_strength),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        if self.date_range.0 >= self.date_range.1 {
            return Err(Error::Config("date_range start must be before end".into()));
        }
        Ok(())
    }
}

fn poisson(rng: &mut ChaCha12Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    // Knuth's method; lambdas here are small
    let l = (-lambda).exp();
    let mut k = 0;
    let mut p = 1.0;
    loop {
        p *= rng.gen::<f64>();
        if p <= l {
            return k;
        }
        k += 1;
    }
}

fn random_time(rng: &mut ChaCha12Rng) -> NaiveTime {
    NaiveTime::from_hms_opt(rng.gen_range(0..24), rng.gen_range(0..60), rng.gen_range(0..60))
        .unwrap()
}

/// Gender-shifted multinomial weights over the diagnosis groups.
fn diagnosis_weights(is_man: bool, bias: f64) -> Vec<f64> {
    let mut weights = vec![1.0; DIAGNOSIS_GROUPS.len()];
    let man_heavy = ["Substance-Related and Addiction Disorders", "Schizophrenia and other psychotic disorders"];
    let woman_heavy = ["Depressive Disorders", "Nutrition and Eating Disorders"];
    for (i, group) in DIAGNOSIS_GROUPS.iter().enumerate() {
        if man_heavy.contains(group) {
            weights[i] = if is_man { 1.0 + 2.0 * bias } else { 1.0 };
        } else if woman_heavy.contains(group) {
            weights[i] = if is_man { 1.0 } else { 1.0 + 2.0 * bias };
        }
    }
    weights
}

fn sample_weighted(rng: &mut ChaCha12Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        target -= w;
        if target < 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

struct Generator<'a> {
    cfg: &'a SynthConfig,
    rng: ChaCha12Rng,
    bundle: RawEhrBundle,
    drugs: Vec<String>,
    rx_counter: usize,
}

impl Generator<'_> {
    fn push_medication(
        &mut self,
        pid: &str,
        date: Option<NaiveDate>,
        drug: usize,
        dose: f64,
    ) -> Result<()> {
        let time = random_time(&mut self.rng);
        self.rx_counter += 1;
        self.bundle.medication.push_row(vec![
            Cell::Ident(pid.to_string()),
            Cell::Ident(format!("RX{:07}", self.rx_counter)),
            Cell::Ident(format!("N05BA{:02}", drug + 1)),
            Cell::Cat(self.drugs[drug].clone()),
            Cell::Float(dose),
            Cell::Cat("mg".into()),
            date.map_or(Cell::Missing, Cell::Date),
            Cell::Time(time),
            Cell::Bool(true),
            Cell::Float(dose),
            Cell::Float(dose),
            Cell::Bool(false),
            Cell::Bool(false),
        ])
    }

    fn benzo_events(
        &mut self,
        pid: &str,
        base: NaiveDate,
        day_lo: u64,
        day_hi: u64,
        mean_events: f64,
    ) -> Result<()> {
        let n = 1 + poisson(&mut self.rng, mean_events);
        for _ in 0..n {
            let day = self.rng.gen_range(day_lo..=day_hi);
            let drug = self.rng.gen_range(0..self.drugs.len());
            let dose = f64::from(self.rng.gen_range(1..=20)) * 0.5;
            self.push_medication(pid, Some(base + Days::new(day)), drug, dose)?;
        }
        Ok(())
    }

    fn diagnoses(&mut self, pid: &str, adm: NaiveDate, duration: u64, is_man: bool) -> Result<()> {
        let bias = self.cfg.bias_strength;
        let weights = diagnosis_weights(is_man, bias);
        let n = 1 + poisson(&mut self.rng, 0.8);
        for d in 0..n {
            let in_window = self.rng.gen_bool(0.75);
            let offset = if in_window {
                self.rng.gen_range(0..14)
            } else {
                self.rng.gen_range(14..duration.max(15).min(60))
            };
            let start = adm + Days::new(offset);
            let end = start + Days::new(self.rng.gen_range(30..200));
            let diag_date_missing = self.rng.gen_bool(0.15);
            let end_missing = diag_date_missing && self.rng.gen_bool(0.5);
            let group = sample_weighted(&mut self.rng, &weights);
            let care = f64::from(self.rng.gen_range(1..=7));
            let multi = self.rng.gen_bool(0.2);
            let pers = self.rng.gen_bool(0.15);
            self.bundle.diagnoses.push_row(vec![
                Cell::Ident(pid.to_string()),
                Cell::Ident(format!("D{pid}-{d}")),
                Cell::Date(start),
                if end_missing { Cell::Missing } else { Cell::Date(end) },
                Cell::Cat(DIAGNOSIS_GROUPS[group].to_string()),
                Cell::Float(care),
                Cell::Bool(multi),
                Cell::Bool(pers),
                Cell::Bool(true),
                if diag_date_missing { Cell::Missing } else { Cell::Date(start) },
            ])?;
        }
        Ok(())
    }

    /// Returns the number of incidents falling inside the admission, which
    /// feeds back into the future-administration probability.
    fn incidents(&mut self, pid: &str, adm: NaiveDate, is_man: bool) -> Result<u64> {
        let proxy = 0.8 * self.cfg.bias_strength;
        let scale = if is_man { 1.0 + proxy } else { 1.0 - proxy };
        let n_before = poisson(&mut self.rng, 1.2 * scale);
        for _ in 0..n_before {
            let days_back = self.rng.gen_range(1..=180);
            let date = adm - Days::new(days_back);
            let time = random_time(&mut self.rng);
            self.bundle.aggression.push_row(vec![
                Cell::Ident(pid.to_string()),
                Cell::Date(date),
                Cell::Time(time),
            ])?;
        }
        let n_during = poisson(&mut self.rng, 1.0 * scale);
        for _ in 0..n_during {
            let day = self.rng.gen_range(0..14);
            let date = adm + Days::new(day);
            let time = random_time(&mut self.rng);
            self.bundle.aggression.push_row(vec![
                Cell::Ident(pid.to_string()),
                Cell::Date(date),
                Cell::Time(time),
            ])?;
        }
        Ok(n_during)
    }
}

/// Generates a raw EHR bundle. Deterministic for a fixed seed.
pub fn generate(cfg: &SynthConfig) -> Result<RawEhrBundle> {
    cfg.validate()?;
    let span_days = (cfg.date_range.1 - cfg.date_range.0).num_days().max(1) as u64;
    let mut g = Generator {
        cfg,
        rng: ChaCha12Rng::seed_from_u64(cfg.seed),
        bundle: RawEhrBundle::empty(),
        drugs: DoseTable::standard()
            .drug_names()
            .into_iter()
            .map(String::from)
            .collect(),
        rx_counter: 0,
    };

    for p in 0..cfg.n_patients {
        let pid = format!("P{p:05}");
        let is_man = g.rng.gen_bool(0.5);
        let age_dossier = g.rng.gen_range(18..=80_i64);
        g.bundle
            .patient
            .push_row(vec![Cell::Ident(pid.clone()), Cell::Int(age_dossier)])?;

        let n_admissions = 1 + poisson(&mut g.rng, cfg.mean_admissions_per_patient - 1.0);
        for a in 0..n_admissions {
            let adm = cfg.date_range.0 + Days::new(g.rng.gen_range(0..span_days));
            let emergency = g.rng.gen_bool(cfg.p_emergency);
            let discharged = g.rng.gen_bool(0.92);
            let duration: u64 = if discharged {
                if g.rng.gen_bool(0.82) {
                    14 + poisson(&mut g.rng, 25.0)
                } else {
                    g.rng.gen_range(1..14)
                }
            } else {
                g.rng.gen_range(1..60)
            };
            let ward = if g.rng.gen_bool(0.85) {
                Cell::Ident(WARD_NAMES[g.rng.gen_range(0..WARD_NAMES.len())].to_string())
            } else {
                Cell::Missing
            };
            let adm_time = random_time(&mut g.rng);
            let dis_time = random_time(&mut g.rng);
            g.bundle.admissions.push_row(vec![
                Cell::Ident(format!("A{p:05}-{a}")),
                Cell::Ident(pid.clone()),
                ward,
                Cell::Date(adm),
                if discharged {
                    Cell::Date(adm + Days::new(duration))
                } else {
                    Cell::Missing
                },
                Cell::Time(adm_time),
                Cell::Time(dis_time),
                Cell::Bool(emergency),
                Cell::Bool(a == 0),
                Cell::Cat(if is_man { GENDER_MAN } else { GENDER_WOMAN }.to_string()),
                Cell::Int(age_dossier + g.rng.gen_range(0..=3)),
                Cell::Cat(if discharged { STATUS_DISCHARGED } else { STATUS_ONGOING }.to_string()),
                Cell::Int(duration as i64),
            ])?;

            g.diagnoses(&pid, adm, duration.max(15), is_man)?;
            let n_incidents = g.incidents(&pid, adm, is_man)?;

            if discharged && duration >= 14 {
                // latent benzo propensity ties past dose to the future label
                let propensity = g.rng.gen::<f64>();
                let p_past = (0.15 + 0.7 * propensity).clamp(0.0, 1.0);
                if g.rng.gen_bool(p_past) {
                    // dose magnitude tracks the propensity, so past dose
                    // carries a genuine, gender-independent signal
                    g.benzo_events(&pid, adm, 0, 13, 1.0 + 3.0 * propensity)?;
                }
                // gender biases the label through two routes: a small direct
                // rate shift, and the incident count, whose rate itself
                // shifts with gender (a mediated path the models can see)
                let shift = cfg.bias_strength * cfg.base_benzo_rate
                    * if is_man { 0.1 } else { -0.1 };
                let mediator = 0.08 * (n_incidents.min(4) as f64 - 1.0);
                let p_future = (cfg.base_benzo_rate - 0.35 + 0.7 * propensity
                    + mediator
                    + shift)
                    .clamp(0.02, 0.98);
                if g.rng.gen_bool(p_future) && duration >= 15 {
                    g.benzo_events(&pid, adm, 14, duration, 2.0)?;
                }
            } else if g.rng.gen_bool(0.2) {
                // incidental medication during non-qualifying admissions
                let last_day = duration.max(1) - 1;
                g.benzo_events(&pid, adm, 0, last_day.max(1), 0.5)?;
            }
        }
    }

    // one deliberately dateless medication row, exercising the removal rule
    let first_pid = "P00000".to_string();
    let drug = g.rng.gen_range(0..g.drugs.len());
    g.push_medication(&first_pid, None, drug, 5.0)?;

    Ok(g.bundle)
}

/// Headline counts over qualifying admissions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SynthSummary {
    pub n_admissions: usize,
    pub n_men: usize,
    pub n_women: usize,
    pub n_with_past_benzo: usize,
    pub n_with_future_benzo: usize,
}

/// Counts admissions (completed, >= 14 days), gender split, and admissions
/// with any administered benzodiazepine in / after the first 14 days.
pub fn summarize(bundle: &RawEhrBundle) -> Result<SynthSummary> {
    let mut med_dates: std::collections::HashMap<&str, Vec<NaiveDate>> =
        std::collections::HashMap::new();
    for i in 0..bundle.medication.n_rows() {
        if bundle.medication.cell(i, COL_ADMINISTERED)?.as_bool() != Some(true) {
            continue;
        }
        if let Some(date) = bundle.medication.cell(i, COL_ADMINISTRATION_DATE)?.as_date() {
            let pid = bundle
                .medication
                .cell(i, COL_PATIENT_ID)?
                .as_str()
                .unwrap_or_default();
            med_dates.entry(pid).or_default().push(date);
        }
    }

    let mut summary = SynthSummary::default();
    for i in 0..bundle.admissions.n_rows() {
        let discharged =
            bundle.admissions.cell(i, COL_ADMISSION_STATUS)?.as_str() == Some(STATUS_DISCHARGED);
        let duration = bundle
            .admissions
            .cell(i, COL_DURATION_DAYS)?
            .as_f64()
            .unwrap_or(0.0);
        if !discharged || duration < 14.0 {
            continue;
        }
        summary.n_admissions += 1;
        match bundle.admissions.cell(i, COL_GENDER)?.as_str() {
            Some(GENDER_MAN) => summary.n_men += 1,
            Some(GENDER_WOMAN) => summary.n_women += 1,
            _ => {}
        }
        let adm = match bundle.admissions.cell(i, COL_ADMISSION_DATE)?.as_date() {
            Some(d) => d,
            None => continue,
        };
        let window_end = adm + Days::new(13);
        let admission_end = adm + Days::new(duration as u64);
        if let Some(pid) = bundle.admissions.cell(i, COL_PATIENT_ID)?.as_str() {
            if let Some(dates) = med_dates.get(pid) {
                if dates.iter().any(|d| *d >= adm && *d <= window_end) {
                    summary.n_with_past_benzo += 1;
                }
                if dates.iter().any(|d| *d > window_end && *d <= admission_end) {
                    summary.n_with_future_benzo += 1;
                }
            }
        }
    }
    Ok(summary)
}
