use std::collections::HashSet;
use std::path::Path;

use crate::data::{Cell, ColumnKind, Schema, Table};
use crate::error::{Error, Result};

// Admissions columns
pub const COL_ADMISSION_ID: &str = "Admission ID";
pub const COL_PATIENT_ID: &str = "Patient ID";
pub const COL_WARD_ID: &str = "Nursing ward ID";
pub const COL_ADMISSION_DATE: &str = "Admission date";
pub const COL_DISCHARGE_DATE: &str = "Discharge date";
pub const COL_ADMISSION_TIME: &str = "Admission time";
pub const COL_DISCHARGE_TIME: &str = "Discharge time";
pub const COL_EMERGENCY: &str = "Emergency";
pub const COL_FIRST_ADMISSION: &str = "First admission";
pub const COL_GENDER: &str = "Gender";
pub const COL_AGE_AT_ADMISSION: &str = "Age at admission";
pub const COL_ADMISSION_STATUS: &str = "Admission status";
pub const COL_DURATION_DAYS: &str = "Duration in days";

// Medication columns
pub const COL_PRESCRIPTION_ID: &str = "Prescription ID";
pub const COL_ATC_CODE: &str = "ATC code";
pub const COL_MEDICATION_NAME: &str = "Medication name";
pub const COL_DOSE: &str = "Dose";
pub const COL_UNIT: &str = "Unit";
pub const COL_ADMINISTRATION_DATE: &str = "Administration date";
pub const COL_ADMINISTRATION_TIME: &str = "Administration time";
pub const COL_ADMINISTERED: &str = "Administered";
pub const COL_DOSE_USED: &str = "Dose used";
pub const COL_ORIGINAL_DOSE: &str = "Original dose";
pub const COL_CONTINUATION: &str = "IsContinuationAfterSuspension";
pub const COL_NOT_ADMINISTERED: &str = "Not administered";

// Diagnoses columns
pub const COL_DIAGNOSIS_NUMBER: &str = "Diagnosis number";
pub const COL_START_DATE: &str = "Start date";
pub const COL_END_DATE: &str = "End date";
pub const COL_DIAGNOSIS_GROUP: &str = "Main diagnosis group";
pub const COL_CARE_DEMAND: &str = "Level of care demand";
pub const COL_MULTIPLE_PROBLEM: &str = "Multiple problem";
pub const COL_PERSONALITY_DISORDER: &str = "Personality disorder";
pub const COL_DIAG_ADMISSION: &str = "Admission";
pub const COL_DIAGNOSIS_DATE: &str = "Diagnosis date";

// Aggression columns
pub const COL_INCIDENT_DATE: &str = "Date of incident";
pub const COL_INCIDENT_TIME: &str = "Start time";

// Patient columns
pub const COL_AGE_AT_DOSSIER: &str = "Age at start of dossier";

pub const GENDER_MAN: &str = "Man";
pub const GENDER_WOMAN: &str = "Woman";
pub const STATUS_DISCHARGED: &str = "Discharged";
pub const STATUS_ONGOING: &str = "Ongoing";

pub fn admissions_schema() -> Schema {
    use ColumnKind::*;
    Schema::new(vec![
        (COL_ADMISSION_ID.into(), Identifier),
        (COL_PATIENT_ID.into(), Identifier),
        (COL_WARD_ID.into(), Identifier),
        (COL_ADMISSION_DATE.into(), Date),
        (COL_DISCHARGE_DATE.into(), Date),
        (COL_ADMISSION_TIME.into(), Time),
        (COL_DISCHARGE_TIME.into(), Time),
        (COL_EMERGENCY.into(), Boolean),
        (COL_FIRST_ADMISSION.into(), Boolean),
        (COL_GENDER.into(), Categorical),
        (COL_AGE_AT_ADMISSION.into(), Integer),
        (COL_ADMISSION_STATUS.into(), Categorical),
        (COL_DURATION_DAYS.into(), Integer),
    ])
}

pub fn medication_schema() -> Schema {
    use ColumnKind::*;
    Schema::new(vec![
        (COL_PATIENT_ID.into(), Identifier),
        (COL_PRESCRIPTION_ID.into(), Identifier),
        (COL_ATC_CODE.into(), Identifier),
        (COL_MEDICATION_NAME.into(), Categorical),
        (COL_DOSE.into(), Float),
        (COL_UNIT.into(), Categorical),
        (COL_ADMINISTRATION_DATE.into(), Date),
        (COL_ADMINISTRATION_TIME.into(), Time),
        (COL_ADMINISTERED.into(), Boolean),
        (COL_DOSE_USED.into(), Float),
        (COL_ORIGINAL_DOSE.into(), Float),
        (COL_CONTINUATION.into(), Boolean),
        (COL_NOT_ADMINISTERED.into(), Boolean),
    ])
}

pub fn diagnoses_schema() -> Schema {
    use ColumnKind::*;
    Schema::new(vec![
        (COL_PATIENT_ID.into(), Identifier),
        (COL_DIAGNOSIS_NUMBER.into(), Identifier),
        (COL_START_DATE.into(), Date),
        (COL_END_DATE.into(), Date),
        (COL_DIAGNOSIS_GROUP.into(), Categorical),
        (COL_CARE_DEMAND.into(), Float),
        (COL_MULTIPLE_PROBLEM.into(), Boolean),
        (COL_PERSONALITY_DISORDER.into(), Boolean),
        (COL_DIAG_ADMISSION.into(), Boolean),
        (COL_DIAGNOSIS_DATE.into(), Date),
    ])
}

pub fn aggression_schema() -> Schema {
    use ColumnKind::*;
    Schema::new(vec![
        (COL_PATIENT_ID.into(), Identifier),
        (COL_INCIDENT_DATE.into(), Date),
        (COL_INCIDENT_TIME.into(), Time),
    ])
}

pub fn patient_schema() -> Schema {
    use ColumnKind::*;
    Schema::new(vec![
        (COL_PATIENT_ID.into(), Identifier),
        (COL_AGE_AT_DOSSIER.into(), Integer),
    ])
}

/// The five raw EHR tables.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEhrBundle {
    pub admissions: Table,
    pub medication: Table,
    pub diagnoses: Table,
    pub aggression: Table,
    pub patient: Table,
}

const FILE_NAMES: [&str; 5] = [
    "admissions.csv",
    "medication.csv",
    "diagnoses.csv",
    "aggression.csv",
    "patient.csv",
];

impl RawEhrBundle {
    pub fn empty() -> RawEhrBundle {
        RawEhrBundle {
            admissions: Table::new("admissions", admissions_schema()),
            medication: Table::new("medication", medication_schema()),
            diagnoses: Table::new("diagnoses", diagnoses_schema()),
            aggression: Table::new("aggression", aggression_schema()),
            patient: Table::new("patient", patient_schema()),
        }
    }

    /// Checks patient-reference integrity, discharge ordering, and the
    /// administered / not-administered exclusivity rule.
    pub fn validate(&self) -> Result<()> {
        let patients: HashSet<&str> = self
            .patient
            .column(COL_PATIENT_ID)?
            .filter_map(Cell::as_str)
            .collect();
        for (table, label) in [
            (&self.admissions, "admissions"),
            (&self.medication, "medication"),
            (&self.diagnoses, "diagnoses"),
            (&self.aggression, "aggression"),
        ] {
            for cell in table.column(COL_PATIENT_ID)? {
                match cell.as_str() {
                    Some(pid) if patients.contains(pid) => {}
                    Some(pid) => {
                        return Err(Error::Integrity(format!(
                            "{label} references unknown patient {pid:?}"
                        )))
                    }
                    None => {
                        return Err(Error::Integrity(format!(
                            "{label} row with missing patient id"
                        )))
                    }
                }
            }
        }
        for i in 0..self.admissions.n_rows() {
            let status = self.admissions.cell(i, COL_ADMISSION_STATUS)?.as_str();
            if status == Some(STATUS_DISCHARGED) {
                let adm = self.admissions.cell(i, COL_ADMISSION_DATE)?.as_date();
                let dis = self.admissions.cell(i, COL_DISCHARGE_DATE)?.as_date();
                if let (Some(a), Some(d)) = (adm, dis) {
                    if d < a {
                        return Err(Error::Integrity(format!(
                            "admission row {i}: discharge {d} before admission {a}"
                        )));
                    }
                }
            }
        }
        for i in 0..self.medication.n_rows() {
            let adm = self.medication.cell(i, COL_ADMINISTERED)?.as_bool();
            let not = self.medication.cell(i, COL_NOT_ADMINISTERED)?.as_bool();
            if adm == Some(true) && not == Some(true) {
                return Err(Error::Integrity(format!(
                    "medication row {i}: administered and not administered both true"
                )));
            }
        }
        Ok(())
    }

    /// Writes the five CSVs into `dir` under their canonical names.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        for (table, file) in self.tables().into_iter().zip(FILE_NAMES) {
            table.write_csv(dir.join(file))?;
        }
        Ok(())
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<RawEhrBundle> {
        let dir = dir.as_ref();
        Ok(RawEhrBundle {
            admissions: Table::load_csv(dir.join(FILE_NAMES[0]), "admissions", admissions_schema())?,
            medication: Table::load_csv(dir.join(FILE_NAMES[1]), "medication", medication_schema())?,
            diagnoses: Table::load_csv(dir.join(FILE_NAMES[2]), "diagnoses", diagnoses_schema())?,
            aggression: Table::load_csv(dir.join(FILE_NAMES[3]), "aggression", aggression_schema())?,
            patient: Table::load_csv(dir.join(FILE_NAMES[4]), "patient", patient_schema())?,
        })
    }

    fn tables(&self) -> [&Table; 5] {
        [
            &self.admissions,
            &self.medication,
            &self.diagnoses,
            &self.aggression,
            &self.patient,
        ]
    }
}
