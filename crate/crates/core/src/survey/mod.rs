//! Survey encoding: schemas that map categorical answers to integer scores,
//! dimension aggregation, and the survey-specific IVI / ASI averages.

mod ingest;
mod record;
mod schema;

pub use ingest::{ingest_survey, write_rejects, IngestError, IngestOutcome, Reject};
pub use record::{
    dimension_score, ipoll_asi, ipoll_ivi, Demographics, DivisorMode, EncodedRecord, RecordError,
    AGE_GROUPS, GENDERS, RACE_ETHNICITIES,
};
pub use schema::{
    load_schema, normalize_answer, Action, Aggregation, DimensionId, DimensionSpec, EncodeError,
    Encoded, EncodingRule, EncodingSchema, IndexKind, QuestionSpec, SchemaError, IPOLL_SCHEMA,
};
