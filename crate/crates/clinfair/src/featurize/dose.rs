use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// The 17 default tranquilizers and their diazepam-equivalence multipliers.
const STANDARD: [(&str, f64); 17] = [
    ("Diazepam", 1.0),
    ("Alprazolam", 10.0),
    ("Bromazepam", 1.0),
    ("Brotizolam", 40.0),
    ("Chlordiazepoxide", 0.5),
    ("Clobazam", 0.5),
    ("Clorazepate potassium", 0.75),
    ("Flunitrazepam", 0.1),
    ("Flurazepam", 0.33),
    ("Lorazepam", 5.0),
    ("Lormetazepam", 10.0),
    ("Midazolam", 1.33),
    ("Nitrazepam", 1.0),
    ("Oxazepam", 0.33),
    ("Temazepam", 1.0),
    ("Zolpidem", 1.0),
    ("Zopiclone", 1.33),
];

/// Map from tranquilizer name (case-insensitive) to mg-diazepam-per-mg
/// multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct DoseTable {
    entries: BTreeMap<String, (String, f64)>,
}

impl DoseTable {
    pub fn standard() -> DoseTable {
        let mut table = DoseTable {
            entries: BTreeMap::new(),
        };
        for (name, multiplier) in STANDARD {
            table.insert(name, multiplier).expect("standard multipliers are positive");
        }
        table
    }

    pub fn insert(&mut self, name: &str, multiplier: f64) -> Result<()> {
        if !(multiplier > 0.0) {
            return Err(Error::Config(format!(
                "multiplier for {name:?} must be positive, got {multiplier}"
            )));
        }
        self.entries
            .insert(name.to_lowercase(), (name.to_string(), multiplier));
        Ok(())
    }

    pub fn multiplier(&self, drug: &str) -> Result<f64> {
        self.entries
            .get(&drug.to_lowercase())
            .map(|(_, m)| *m)
            .ok_or_else(|| Error::UnknownDrug(drug.to_string()))
    }

    /// Canonical drug names, in deterministic order.
    pub fn drug_names(&self) -> Vec<&str> {
        self.entries.values().map(|(n, _)| n.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Converts a dose of `drug` to milligrams of diazepam.
pub fn diazepam_equivalent(drug: &str, dose_mg: f64, table: &DoseTable) -> Result<f64> {
    if dose_mg < 0.0 {
        return Err(Error::Data(format!("negative dose {dose_mg} for {drug:?}")));
    }
    Ok(dose_mg * table.multiplier(drug)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standard_table_has_seventeen_drugs() {
        assert_eq!(DoseTable::standard().len(), 17);
    }

    #[test]
    fn worked_conversions() {
        let t = DoseTable::standard();
        assert_relative_eq!(diazepam_equivalent("Diazepam", 5.0, &t).unwrap(), 5.0);
        assert_relative_eq!(diazepam_equivalent("Lorazepam", 2.0, &t).unwrap(), 10.0);
        assert_relative_eq!(diazepam_equivalent("Oxazepam", 30.0, &t).unwrap(), 9.9);
    }

    #[test]
    fn lookup_is_case_insensitive() {
        let t = DoseTable::standard();
        assert_relative_eq!(diazepam_equivalent("LORAZEPAM", 2.0, &t).unwrap(), 10.0);
        assert_relative_eq!(diazepam_equivalent("lorazepam", 2.0, &t).unwrap(), 10.0);
    }

    #[test]
    fn zero_dose_converts_to_zero() {
        let t = DoseTable::standard();
        assert_eq!(diazepam_equivalent("Brotizolam", 0.0, &t).unwrap(), 0.0);
    }

    #[test]
    fn unknown_drug_is_an_error() {
        let t = DoseTable::standard();
        assert!(matches!(
            diazepam_equivalent("Quetiapine", 25.0, &t).unwrap_err(),
            Error::UnknownDrug(_)
        ));
    }

    #[test]
    fn table_is_extensible() {
        let mut t = DoseTable::standard();
        t.insert("Quetiapine", 0.25).unwrap();
        assert_relative_eq!(diazepam_equivalent("quetiapine", 4.0, &t).unwrap(), 1.0);
        assert!(t.insert("Bad", 0.0).is_err());
    }
}
