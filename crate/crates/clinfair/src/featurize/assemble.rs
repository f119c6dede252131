use std::collections::HashMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::{Cell, ColumnKind, Schema, Table};
use crate::error::{Error, Result};
use crate::featurize::dose::{diazepam_equivalent, DoseTable};
use crate::featurize::{DIAGNOSIS_GROUPS, WARD_NAMES};
use crate::synth::bundle::{self as cols, RawEhrBundle};

pub const COL_PAST_DOSE: &str = "Past diazepam-equivalent dose";
pub const COL_FUTURE_DOSE: &str = "Future diazepam-equivalent dose";

/// Which date filled in for a diagnosis row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DateProvenance {
    Primary,
    EndFallback,
    StartFallback,
}

/// Diagnosis date fallback chain: diagnosis date, else treatment end date,
/// else treatment start date.
pub fn resolve_diagnosis_date(
    diagnosis_date: Option<NaiveDate>,
    end_date: Option<NaiveDate>,
    start_date: Option<NaiveDate>,
) -> Result<(NaiveDate, DateProvenance)> {
    if let Some(d) = diagnosis_date {
        Ok((d, DateProvenance::Primary))
    } else if let Some(d) = end_date {
        Ok((d, DateProvenance::EndFallback))
    } else if let Some(d) = start_date {
        Ok((d, DateProvenance::StartFallback))
    } else {
        Err(Error::NoDiagnosisDate)
    }
}

/// Keeps completed admissions (status discharged) lasting at least 14 days.
/// Row order is preserved.
pub fn filter_admissions(admissions: &Table) -> Result<Table> {
    let status_idx = admissions.column_index(cols::COL_ADMISSION_STATUS)?;
    let duration_idx = admissions.column_index(cols::COL_DURATION_DAYS)?;
    let mut out = Table::new(admissions.name().to_string(), admissions.schema().clone());
    for row in admissions.rows() {
        let discharged = row[status_idx].as_str() == Some(cols::STATUS_DISCHARGED);
        let long_enough = row[duration_idx].as_f64().map_or(false, |d| d >= 14.0);
        if discharged && long_enough {
            out.push_row(row.to_vec())?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct DateSourceCounts {
    pub primary: usize,
    pub end_fallback: usize,
    pub start_fallback: usize,
}

/// Record of rows dropped and dates substituted during assembly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub dropped_medication_rows: usize,
    pub diagnosis_date_sources: DateSourceCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssembleOptions {
    /// Drop the "Duration in days" column from the output.
    pub drop_duration: bool,
    /// Use only diagnoses whose diagnosis date was present (no fallback)
    /// when setting the diagnosis one-hot columns.
    pub primary_dates_only: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssembledFeatures {
    pub features: Table,
    /// 1 iff benzodiazepines were administered after the first 14 days.
    pub target: Vec<u8>,
    pub provenance: Provenance,
}

/// Schema of the assembled feature table.
pub fn feature_schema(drop_duration: bool) -> Schema {
    use ColumnKind::*;
    let mut columns: Vec<(String, ColumnKind)> = vec![
        (cols::COL_PATIENT_ID.into(), Identifier),
        (cols::COL_EMERGENCY.into(), Boolean),
        (cols::COL_FIRST_ADMISSION.into(), Boolean),
        (cols::COL_GENDER.into(), Boolean),
        (cols::COL_AGE_AT_ADMISSION.into(), Integer),
    ];
    if !drop_duration {
        columns.push((cols::COL_DURATION_DAYS.into(), Integer));
    }
    columns.extend([
        (cols::COL_AGE_AT_DOSSIER.to_string(), Integer),
        ("Incidents during admission".to_string(), Integer),
        ("Incidents before admission".to_string(), Integer),
        (cols::COL_MULTIPLE_PROBLEM.to_string(), Boolean),
        (cols::COL_PERSONALITY_DISORDER.to_string(), Boolean),
        ("Minimum level of care demand".to_string(), Float),
        ("Maximum level of care demand".to_string(), Float),
        (COL_PAST_DOSE.to_string(), Float),
        (COL_FUTURE_DOSE.to_string(), Float),
    ]);
    for ward in WARD_NAMES {
        columns.push((format!("Nursing ward: {ward}"), Boolean));
    }
    for group in DIAGNOSIS_GROUPS {
        columns.push((format!("Diagnosis: {group}"), Boolean));
    }
    Schema::new(columns)
}

struct MedEvent {
    date: NaiveDate,
    diazepam_mg: f64,
}

struct DiagRecord {
    date: NaiveDate,
    provenance: DateProvenance,
    group: String,
    care_demand: Option<f64>,
    multiple_problem: bool,
    personality_disorder: bool,
}

fn require_date(table: &Table, row: usize, col: &str) -> Result<NaiveDate> {
    table.cell(row, col)?.as_date().ok_or_else(|| Error::MissingCell {
        column: col.to_string(),
        row: row + 1,
    })
}

/// Builds the feature table and binary target from a raw bundle.
///
/// One output row per completed admission of at least 14 days, ordered by
/// (patient ID, admission date). Medication rows without an administration
/// date are dropped and counted; only administered rows contribute to doses.
pub fn assemble(
    bundle: &RawEhrBundle,
    dose_table: &DoseTable,
    opts: &AssembleOptions,
) -> Result<AssembledFeatures> {
    bundle.validate()?;
    let mut provenance = Provenance::default();

    // medication events per patient, converted to diazepam equivalents
    let mut meds: HashMap<String, Vec<MedEvent>> = HashMap::new();
    for i in 0..bundle.medication.n_rows() {
        let date = match bundle.medication.cell(i, cols::COL_ADMINISTRATION_DATE)?.as_date() {
            Some(d) => d,
            None => {
                provenance.dropped_medication_rows += 1;
                continue;
            }
        };
        if bundle.medication.cell(i, cols::COL_ADMINISTERED)?.as_bool() != Some(true) {
            continue;
        }
        let pid = bundle
            .medication
            .cell(i, cols::COL_PATIENT_ID)?
            .as_str()
            .expect("validated")
            .to_string();
        let name = bundle
            .medication
            .cell(i, cols::COL_MEDICATION_NAME)?
            .as_str()
            .ok_or_else(|| Error::MissingCell {
                column: cols::COL_MEDICATION_NAME.to_string(),
                row: i + 1,
            })?;
        let dose = bundle
            .medication
            .cell(i, cols::COL_DOSE)?
            .as_f64()
            .ok_or_else(|| Error::MissingCell {
                column: cols::COL_DOSE.to_string(),
                row: i + 1,
            })?;
        let diazepam_mg = diazepam_equivalent(name, dose, dose_table)?;
        meds.entry(pid).or_default().push(MedEvent { date, diazepam_mg });
    }

    let mut diagnoses: HashMap<String, Vec<DiagRecord>> = HashMap::new();
    for i in 0..bundle.diagnoses.n_rows() {
        let (date, prov) = resolve_diagnosis_date(
            bundle.diagnoses.cell(i, cols::COL_DIAGNOSIS_DATE)?.as_date(),
            bundle.diagnoses.cell(i, cols::COL_END_DATE)?.as_date(),
            bundle.diagnoses.cell(i, cols::COL_START_DATE)?.as_date(),
        )?;
        match prov {
            DateProvenance::Primary => provenance.diagnosis_date_sources.primary += 1,
            DateProvenance::EndFallback => provenance.diagnosis_date_sources.end_fallback += 1,
            DateProvenance::StartFallback => provenance.diagnosis_date_sources.start_fallback += 1,
        }
        let pid = bundle
            .diagnoses
            .cell(i, cols::COL_PATIENT_ID)?
            .as_str()
            .expect("validated")
            .to_string();
        diagnoses.entry(pid).or_default().push(DiagRecord {
            date,
            provenance: prov,
            group: bundle
                .diagnoses
                .cell(i, cols::COL_DIAGNOSIS_GROUP)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
            care_demand: bundle.diagnoses.cell(i, cols::COL_CARE_DEMAND)?.as_f64(),
            multiple_problem: bundle
                .diagnoses
                .cell(i, cols::COL_MULTIPLE_PROBLEM)?
                .as_bool()
                .unwrap_or(false),
            personality_disorder: bundle
                .diagnoses
                .cell(i, cols::COL_PERSONALITY_DISORDER)?
                .as_bool()
                .unwrap_or(false),
        });
    }

    let mut incidents: HashMap<String, Vec<NaiveDate>> = HashMap::new();
    for i in 0..bundle.aggression.n_rows() {
        let pid = bundle
            .aggression
            .cell(i, cols::COL_PATIENT_ID)?
            .as_str()
            .expect("validated")
            .to_string();
        incidents.entry(pid).or_default().push(require_date(
            &bundle.aggression,
            i,
            cols::COL_INCIDENT_DATE,
        )?);
    }

    let mut dossier_age: HashMap<String, f64> = HashMap::new();
    for i in 0..bundle.patient.n_rows() {
        let pid = bundle
            .patient
            .cell(i, cols::COL_PATIENT_ID)?
            .as_str()
            .expect("validated")
            .to_string();
        let age = bundle
            .patient
            .cell(i, cols::COL_AGE_AT_DOSSIER)?
            .as_f64()
            .ok_or_else(|| Error::MissingCell {
                column: cols::COL_AGE_AT_DOSSIER.to_string(),
                row: i + 1,
            })?;
        dossier_age.insert(pid, age);
    }

    let filtered = filter_admissions(&bundle.admissions)?;
    let mut order: Vec<usize> = (0..filtered.n_rows()).collect();
    let sort_key = |i: usize| -> Result<(String, NaiveDate, String)> {
        Ok((
            filtered
                .cell(i, cols::COL_PATIENT_ID)?
                .as_str()
                .expect("validated")
                .to_string(),
            require_date(&filtered, i, cols::COL_ADMISSION_DATE)?,
            filtered
                .cell(i, cols::COL_ADMISSION_ID)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
        ))
    };
    let keys: Vec<_> = order
        .iter()
        .map(|&i| sort_key(i))
        .collect::<Result<Vec<_>>>()?;
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));

    let schema = feature_schema(opts.drop_duration);
    let mut features = Table::new("features", schema);
    let mut target = Vec::with_capacity(filtered.n_rows());
    let empty_meds = Vec::new();
    let empty_diag = Vec::new();
    let empty_inc = Vec::new();

    for &i in &order {
        let pid = filtered.cell(i, cols::COL_PATIENT_ID)?.as_str().expect("validated");
        let admission = require_date(&filtered, i, cols::COL_ADMISSION_DATE)?;
        let duration = filtered
            .cell(i, cols::COL_DURATION_DAYS)?
            .as_f64()
            .expect("filtered on duration") as i64;
        // first 14 days = calendar days 0..13 after admission, inclusive
        let window_end = admission + chrono::Days::new(13);
        let admission_end = admission + chrono::Days::new(duration as u64);

        let mut past = 0.0;
        let mut future = 0.0;
        for event in meds.get(pid).unwrap_or(&empty_meds) {
            if event.date < admission || event.date > admission_end {
                continue;
            }
            if event.date <= window_end {
                past += event.diazepam_mg;
            } else {
                future += event.diazepam_mg;
            }
        }

        let patient_diags = diagnoses.get(pid).unwrap_or(&empty_diag);
        let mut diag_onehots = [false; DIAGNOSIS_GROUPS.len()];
        let mut care: Vec<f64> = Vec::new();
        let mut multiple_problem = false;
        let mut personality_disorder = false;
        for d in patient_diags {
            let in_admission = d.date >= admission && d.date <= admission_end;
            let in_window = d.date >= admission && d.date <= window_end;
            if in_window && (!opts.primary_dates_only || d.provenance == DateProvenance::Primary) {
                if let Some(k) = DIAGNOSIS_GROUPS.iter().position(|g| *g == d.group) {
                    diag_onehots[k] = true;
                }
            }
            if in_admission {
                if let Some(c) = d.care_demand {
                    care.push(c);
                }
                multiple_problem |= d.multiple_problem;
                personality_disorder |= d.personality_disorder;
            }
        }
        let care_min = care.iter().cloned().fold(f64::INFINITY, f64::min);
        let care_max = care.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (care_min, care_max) = if care.is_empty() {
            (0.0, 0.0)
        } else {
            (care_min, care_max)
        };

        let patient_incidents = incidents.get(pid).unwrap_or(&empty_inc);
        let during = patient_incidents
            .iter()
            .filter(|d| **d >= admission && **d <= window_end)
            .count() as i64;
        let before = patient_incidents.iter().filter(|d| **d < admission).count() as i64;

        let ward = filtered.cell(i, cols::COL_WARD_ID)?.as_str();
        let gender = filtered.cell(i, cols::COL_GENDER)?.as_str().ok_or_else(|| {
            Error::MissingCell {
                column: cols::COL_GENDER.to_string(),
                row: i + 1,
            }
        })?;
        let age_at_admission = filtered
            .cell(i, cols::COL_AGE_AT_ADMISSION)?
            .as_f64()
            .ok_or_else(|| Error::MissingCell {
                column: cols::COL_AGE_AT_ADMISSION.to_string(),
                row: i + 1,
            })? as i64;
        let age_at_dossier = *dossier_age.get(pid).ok_or_else(|| {
            Error::Integrity(format!("patient {pid:?} missing from patient table"))
        })? as i64;

        let mut row = vec![
            Cell::Ident(pid.to_string()),
            Cell::Bool(
                filtered
                    .cell(i, cols::COL_EMERGENCY)?
                    .as_bool()
                    .unwrap_or(false),
            ),
            Cell::Bool(
                filtered
                    .cell(i, cols::COL_FIRST_ADMISSION)?
                    .as_bool()
                    .unwrap_or(false),
            ),
            Cell::Bool(gender == cols::GENDER_MAN),
            Cell::Int(age_at_admission),
        ];
        if !opts.drop_duration {
            row.push(Cell::Int(duration));
        }
        row.extend([
            Cell::Int(age_at_dossier),
            Cell::Int(during),
            Cell::Int(before),
            Cell::Bool(multiple_problem),
            Cell::Bool(personality_disorder),
            Cell::Float(care_min),
            Cell::Float(care_max),
            Cell::Float(past),
            Cell::Float(future),
        ]);
        for w in WARD_NAMES {
            row.push(Cell::Bool(ward == Some(w)));
        }
        for on in diag_onehots {
            row.push(Cell::Bool(on));
        }
        features.push_row(row)?;
        target.push(u8::from(future > 0.0));
    }

    Ok(AssembledFeatures {
        features,
        target,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Cell;
    use crate::synth::bundle::*;
    use approx::assert_relative_eq;
    use chrono::NaiveTime;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn admission_row(
        id: &str,
        pid: &str,
        ward: Option<&str>,
        adm: &str,
        status: &str,
        duration: i64,
        gender: &str,
    ) -> Vec<Cell> {
        let a = date(adm);
        vec![
            Cell::Ident(id.into()),
            Cell::Ident(pid.into()),
            ward.map_or(Cell::Missing, |w| Cell::Ident(w.into())),
            Cell::Date(a),
            Cell::Date(a + chrono::Days::new(duration as u64)),
            Cell::Time(NaiveTime::from_hms_opt(10, 0, 0).unwrap()),
            Cell::Time(NaiveTime::from_hms_opt(12, 0, 0).unwrap()),
            Cell::Bool(false),
            Cell::Bool(true),
            Cell::Cat(gender.into()),
            Cell::Int(40),
            Cell::Cat(status.into()),
            Cell::Int(duration),
        ]
    }

    fn med_row(pid: &str, drug: &str, dose: f64, when: Option<&str>) -> Vec<Cell> {
        vec![
            Cell::Ident(pid.into()),
            Cell::Ident("rx1".into()),
            Cell::Ident("N05BA01".into()),
            Cell::Cat(drug.into()),
            Cell::Float(dose),
            Cell::Cat("mg".into()),
            when.map_or(Cell::Missing, |d| Cell::Date(date(d))),
            Cell::Time(NaiveTime::from_hms_opt(9, 0, 0).unwrap()),
            Cell::Bool(true),
            Cell::Float(dose),
            Cell::Float(dose),
            Cell::Bool(false),
            Cell::Bool(false),
        ]
    }

    fn one_patient_bundle() -> RawEhrBundle {
        let mut b = RawEhrBundle::empty();
        b.patient
            .push_row(vec![Cell::Ident("p1".into()), Cell::Int(35)])
            .unwrap();
        b.admissions
            .push_row(admission_row(
                "a1",
                "p1",
                Some(crate::featurize::WARD_NAMES[0]),
                "2020-01-01",
                STATUS_DISCHARGED,
                30,
                GENDER_MAN,
            ))
            .unwrap();
        b
    }

    #[test]
    fn filter_keeps_boundary_duration_and_drops_ongoing() {
        let mut b = RawEhrBundle::empty();
        b.patient
            .push_row(vec![Cell::Ident("p1".into()), Cell::Int(35)])
            .unwrap();
        for (id, status, duration) in [
            ("a1", STATUS_DISCHARGED, 14),
            ("a2", STATUS_ONGOING, 60),
            ("a3", STATUS_DISCHARGED, 13),
            ("a4", STATUS_DISCHARGED, 45),
            ("a5", STATUS_ONGOING, 5),
        ] {
            b.admissions
                .push_row(admission_row(id, "p1", None, "2020-01-01", status, duration, GENDER_MAN))
                .unwrap();
        }
        let kept = filter_admissions(&b.admissions).unwrap();
        assert_eq!(kept.n_rows(), 2);
        assert_eq!(kept.cell(0, COL_ADMISSION_ID).unwrap().as_str(), Some("a1"));
        assert_eq!(kept.cell(1, COL_ADMISSION_ID).unwrap().as_str(), Some("a4"));
    }

    #[test]
    fn date_fallback_chain() {
        let d = date("2020-01-05");
        let e = date("2020-02-01");
        let s = date("2019-12-01");
        assert_eq!(
            resolve_diagnosis_date(Some(d), Some(e), Some(s)).unwrap(),
            (d, DateProvenance::Primary)
        );
        assert_eq!(
            resolve_diagnosis_date(None, Some(e), Some(s)).unwrap(),
            (e, DateProvenance::EndFallback)
        );
        assert_eq!(
            resolve_diagnosis_date(None, None, Some(s)).unwrap(),
            (s, DateProvenance::StartFallback)
        );
        assert!(matches!(
            resolve_diagnosis_date(None, None, None).unwrap_err(),
            Error::NoDiagnosisDate
        ));
    }

    #[test]
    fn dose_windowing_hand_example() {
        // Lorazepam 2 mg on day 3 -> past 10.0; Diazepam 5 mg on day 20 -> future 5.0
        let mut b = one_patient_bundle();
        b.medication
            .push_row(med_row("p1", "Lorazepam", 2.0, Some("2020-01-04")))
            .unwrap();
        b.medication
            .push_row(med_row("p1", "Diazepam", 5.0, Some("2020-01-21")))
            .unwrap();
        let out = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        assert_eq!(out.features.n_rows(), 1);
        let past = out.features.cell(0, COL_PAST_DOSE).unwrap().as_f64().unwrap();
        let future = out.features.cell(0, COL_FUTURE_DOSE).unwrap().as_f64().unwrap();
        assert_relative_eq!(past, 10.0);
        assert_relative_eq!(future, 5.0);
        assert_eq!(out.target, vec![1]);
    }

    #[test]
    fn past_only_administrations_give_target_zero() {
        let mut b = one_patient_bundle();
        b.medication
            .push_row(med_row("p1", "Diazepam", 10.0, Some("2020-01-01")))
            .unwrap();
        b.medication
            .push_row(med_row("p1", "Diazepam", 10.0, Some("2020-01-14")))
            .unwrap();
        let out = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        assert_eq!(out.target, vec![0]);
        let past = out.features.cell(0, COL_PAST_DOSE).unwrap().as_f64().unwrap();
        assert!(past > 0.0);
    }

    #[test]
    fn dateless_medication_is_dropped_and_counted() {
        let mut b = one_patient_bundle();
        b.medication
            .push_row(med_row("p1", "Diazepam", 10.0, None))
            .unwrap();
        b.medication
            .push_row(med_row("p1", "Diazepam", 2.0, Some("2020-01-20")))
            .unwrap();
        let out = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        assert_eq!(out.provenance.dropped_medication_rows, 1);
        let future = out.features.cell(0, COL_FUTURE_DOSE).unwrap().as_f64().unwrap();
        assert_relative_eq!(future, 2.0);
    }

    #[test]
    fn not_administered_rows_do_not_count() {
        let mut b = one_patient_bundle();
        let mut row = med_row("p1", "Diazepam", 10.0, Some("2020-01-20"));
        row[8] = Cell::Bool(false); // Administered
        row[12] = Cell::Bool(true); // Not administered
        b.medication.push_row(row).unwrap();
        let out = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        assert_eq!(out.target, vec![0]);
    }

    #[test]
    fn unmatched_ward_gets_all_zero_onehots() {
        let mut b = RawEhrBundle::empty();
        b.patient
            .push_row(vec![Cell::Ident("p1".into()), Cell::Int(35)])
            .unwrap();
        b.admissions
            .push_row(admission_row(
                "a1",
                "p1",
                None,
                "2020-01-01",
                STATUS_DISCHARGED,
                20,
                GENDER_WOMAN,
            ))
            .unwrap();
        let out = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        for w in crate::featurize::WARD_NAMES {
            let cell = out.features.cell(0, &format!("Nursing ward: {w}")).unwrap();
            assert_eq!(cell.as_bool(), Some(false));
        }
    }

    #[test]
    fn schema_has_38_columns_and_37_without_duration() {
        assert_eq!(feature_schema(false).len(), 38);
        assert_eq!(feature_schema(true).len(), 37);
    }

    #[test]
    fn assemble_is_pure() {
        let mut b = one_patient_bundle();
        b.medication
            .push_row(med_row("p1", "Oxazepam", 30.0, Some("2020-01-20")))
            .unwrap();
        let a = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        let c = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn unknown_drug_fails_assembly() {
        let mut b = one_patient_bundle();
        b.medication
            .push_row(med_row("p1", "Haloperidol", 5.0, Some("2020-01-05")))
            .unwrap();
        assert!(matches!(
            assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap_err(),
            Error::UnknownDrug(_)
        ));
    }

    #[test]
    fn primary_dates_only_changes_onehots_only() {
        let mut b = one_patient_bundle();
        // diagnosis with fallback date inside the window
        b.diagnoses
            .push_row(vec![
                Cell::Ident("p1".into()),
                Cell::Ident("d1".into()),
                Cell::Date(date("2020-01-02")),
                Cell::Missing,
                Cell::Cat("Anxiety disorders".into()),
                Cell::Float(3.0),
                Cell::Bool(true),
                Cell::Bool(false),
                Cell::Bool(true),
                Cell::Missing,
            ])
            .unwrap();
        let all = assemble(&b, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
        let primary = assemble(
            &b,
            &DoseTable::standard(),
            &AssembleOptions {
                primary_dates_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        let col = "Diagnosis: Anxiety disorders";
        assert_eq!(all.features.cell(0, col).unwrap().as_bool(), Some(true));
        assert_eq!(primary.features.cell(0, col).unwrap().as_bool(), Some(false));
        // everything except diagnosis one-hots agrees
        for (name, _) in feature_schema(false).columns() {
            if name.starts_with("Diagnosis: ") {
                continue;
            }
            assert_eq!(
                all.features.cell(0, name).unwrap(),
                primary.features.cell(0, name).unwrap(),
                "column {name} changed"
            );
        }
        assert_eq!(all.target, primary.target);
    }
}
