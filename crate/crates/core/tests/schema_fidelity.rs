//! The bundled survey schema checked cell by cell against a hand
//! transcription of the feature-extraction tables.

mod common;

use common::ipoll_tables::{check_schema, SKIP_WEB};
use scvi::survey::{Action, DimensionId, EncodingSchema};

#[test]
fn every_transcribed_cell_encodes_exactly() {
    let cells = check_schema(&EncodingSchema::bundled_ipoll()).unwrap_or_else(|m| panic!("{m:#?}"));
    assert_eq!(cells, 295);
}

#[test]
fn dimension_free_lookup_agrees_where_unambiguous() {
    let schema = EncodingSchema::bundled_ipoll();
    assert_eq!(schema.encode_response("Q7", "Not at all concerned").unwrap(), Action::Assign(3));
    assert_eq!(schema.encode_response("Q37", "False").unwrap(), Action::Assign(5));
    assert_eq!(schema.encode_response("Q36", "5-9 year").unwrap(), Action::Assign(4));
    assert_eq!(schema.encode_response("Q9", SKIP_WEB).unwrap(), Action::Ignore);
    assert_eq!(schema.encode_response("Q7", "  very   CONCERNED ").unwrap(), Action::Assign(0));
}

#[test]
fn aggregation_modes_follow_index() {
    use scvi::survey::Aggregation;
    let schema = EncodingSchema::bundled_ipoll();
    for d in schema.dimensions() {
        let want = if DimensionId::ASI.contains(&d.id) {
            Aggregation::Sum
        } else {
            Aggregation::Mean
        };
        assert_eq!(d.aggregation, want, "{:?}", d.id);
    }
}
