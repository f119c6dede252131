//! Feature engineering: admission filtering, dose conversion, diagnosis date
//! fallback, and assembly of the final feature table and binary target.

mod assemble;
mod dose;

pub use assemble::{
    assemble, feature_schema, filter_admissions, resolve_diagnosis_date, AssembleOptions,
    AssembledFeatures, DateProvenance, Provenance, COL_FUTURE_DOSE, COL_PAST_DOSE,
};
pub use dose::{diazepam_equivalent, DoseTable};

/// The four psychiatry nursing wards encoded as one-hot columns.
pub const WARD_NAMES: [&str; 4] = [
    "Clinical Affective & Psychotic Disorders",
    "Clinical Acute & Intensive Care",
    "Clinical Acute & Intensive Care Youth",
    "Clinical Diagnosis & Early Psychosis",
];

/// The 19 main diagnosis groups encoded as one-hot columns.
pub const DIAGNOSIS_GROUPS: [&str; 19] = [
    "Attention Deficit Disorder",
    "Other issues that may be a cause for concern",
    "Anxiety disorders",
    "Autism spectrum disorder",
    "Bipolar Disorders",
    "Cognitive disorders",
    "Depressive Disorders",
    "Dissociative Disorders",
    "Behavioral disorders",
    "Substance-Related and Addiction Disorders",
    "Obsessive Compulsive and Related Disorders",
    "Other mental disorders",
    "Overige stoornissen op zuigelingen of kinderleeftijd",
    "Personality Disorders",
    "Psychiatric disorders due to a general medical condition",
    "Schizophrenia and other psychotic disorders",
    "Somatic Symptom Disorder and Related Disorders",
    "Trauma- and stressor-related disorders",
    "Nutrition and Eating Disorders",
];
