//! Hand transcription of the two survey feature-extraction tables: one row
//! per table row, expanded to one cell per (question, answer).

use scvi::survey::{Action, DimensionId};

const SKIP_DK: &str = "DON'T KNOW/ SKIPPED ON WEB/REFUSED";
pub const SKIP_WEB: &str = "SKIPPED ON WEB/REFUSED";
const SKIP: &str = "SKIPPED/REFUSED";

pub type Cell = (&'static str, Option<u8>);

pub struct Row {
    pub dimension: DimensionId,
    pub questions: &'static [&'static str],
    pub answers: &'static [Cell],
}

const FAMILIAR: &[Cell] = &[
    ("Very", Some(0)),
    ("Somewhat", Some(1)),
    ("A little", Some(2)),
    ("Not at all", Some(3)),
    (SKIP_DK, None),
];
const TRUE_IS_SAFE: &[Cell] = &[
    ("True", Some(0)),
    ("False", Some(5)),
    ("Not sure", Some(3)),
    (SKIP_WEB, None),
];
const TRUE_IS_RISKY: &[Cell] = &[
    ("True", Some(5)),
    ("False", Some(0)),
    ("Not sure", Some(2)),
    (SKIP_WEB, None),
];
const HOW_OFTEN: &[Cell] = &[
    ("Daily", Some(5)),
    ("Several times a week", Some(4)),
    ("several times a month", Some(3)),
    ("Once a month", Some(2)),
    ("Less than once a month", Some(1)),
    ("Never", Some(0)),
];
const YES_NO_UNSURE_3: &[Cell] = &[("Yes", Some(5)), ("No", Some(0)), ("Not sure", Some(3))];
const DESCRIBES_ME: &[Cell] = &[("very well", Some(5)), ("Somewhat", Some(3)), ("Not at all", Some(0))];
const DESCRIBES_ME_REV: &[Cell] = &[("very well", Some(0)), ("Somewhat", Some(3)), ("Not at all", Some(5))];
const TARGETED: &[Cell] = &[
    ("Yes", Some(5)),
    ("No", Some(0)),
    ("Not sure", Some(3)),
    (SKIP_WEB, None),
];
const KNOWN_TARGET: &[Cell] = &[
    ("Yes", Some(0)),
    ("No", Some(5)),
    ("Not sure", Some(3)),
    (SKIP_WEB, None),
];
const YES_NO_DK: &[Cell] = &[("Yes", Some(5)), ("No", Some(0)), (SKIP_DK, None)];
const DISTRESS_IVI: &[Cell] = &[
    ("Yes, health problems only", Some(3)),
    ("Yes, emotional distress only", Some(3)),
    ("both", Some(5)),
    ("no", Some(0)),
    (SKIP_DK, None),
];
const ASI_YES_NO: &[Cell] = &[
    ("Yes", Some(5)),
    ("No", Some(0)),
    ("Not sure", Some(1)),
    (SKIP, None),
];
const DISTRESS_ASI: &[Cell] = &[
    ("Yes, health only", Some(4)),
    ("Yes, emotional distress only", Some(4)),
    ("Yes, both", Some(5)),
    ("No", Some(0)),
    (SKIP, None),
];

pub fn table() -> Vec<Row> {
    use DimensionId::*;
    vec![
        // IVI table
        Row {
            dimension: AA,
            questions: &["Q7"],
            answers: &[
                ("Very concerned", Some(0)),
                ("Somewhat concerned", Some(1)),
                ("Not too concerned", Some(2)),
                ("Not at all concerned", Some(3)),
                (SKIP_DK, None),
            ],
        },
        Row { dimension: AA, questions: &["Q8", "Q14", "Q21", "Q28"], answers: FAMILIAR },
        Row { dimension: AK, questions: &["Q37", "Q38"], answers: TRUE_IS_SAFE },
        Row { dimension: AK, questions: &["Q39", "Q40"], answers: TRUE_IS_RISKY },
        Row { dimension: BR, questions: &["Q1", "Q2"], answers: HOW_OFTEN },
        Row { dimension: BR, questions: &["Q3"], answers: YES_NO_UNSURE_3 },
        Row { dimension: PC, questions: &["Q6_1", "Q6_2", "Q6_3", "Q6_4"], answers: DESCRIBES_ME },
        Row { dimension: PC, questions: &["Q6_5", "Q6_6"], answers: DESCRIBES_ME_REV },
        Row { dimension: PI, questions: &["Q5"], answers: YES_NO_DK },
        Row {
            dimension: PI,
            questions: &["Q6_7", "Q6_8", "Q6_9"],
            answers: &[("Very well", Some(5)), ("Somewhat", Some(3)), ("Not at all", Some(0))],
        },
        Row { dimension: EE, questions: &["Q4"], answers: YES_NO_UNSURE_3 },
        Row { dimension: EE, questions: &["Q9", "Q15", "Q22", "Q29", "Q35"], answers: TARGETED },
        Row { dimension: EE, questions: &["Q12", "Q19", "Q26", "Q33"], answers: KNOWN_TARGET },
        Row { dimension: EE, questions: &["Q13", "Q20", "Q27", "Q34"], answers: KNOWN_TARGET },
        Row {
            dimension: EE,
            questions: &["Q36"],
            answers: &[
                ("less then a year", Some(1)),
                ("1-2 year", Some(2)),
                ("3-5 year", Some(3)),
                ("5-9 year", Some(4)),
                ("more than 10 years", Some(5)),
                ("don't know/skipped/refused", None),
            ],
        },
        Row { dimension: ER, questions: &["Q10", "Q17", "Q24", "Q31"], answers: YES_NO_DK },
        Row { dimension: ER, questions: &["Q11", "Q18", "Q25", "Q32"], answers: DISTRESS_IVI },
        // ASI table
        Row {
            dimension: F,
            questions: &["Q9", "Q12", "Q15", "Q19", "Q22", "Q26", "Q29", "Q33"],
            answers: ASI_YES_NO,
        },
        Row {
            dimension: C,
            questions: &["Q10", "Q13", "Q17", "Q20", "Q24", "Q27", "Q31", "Q34"],
            answers: ASI_YES_NO,
        },
        Row { dimension: C, questions: &["Q11", "Q18", "Q25", "Q32"], answers: DISTRESS_ASI },
        Row {
            dimension: S,
            questions: &["Q10", "Q13", "Q17", "Q20", "Q24", "Q27", "Q31", "Q34"],
            answers: ASI_YES_NO,
        },
    ]
}

pub fn expected(cell: Option<u8>) -> Action {
    match cell {
        Some(v) => Action::Assign(v),
        None => Action::Ignore,
    }
}

/// Checks every transcribed cell against `schema` and that the schema holds
/// no rule beyond them. Returns the cell count.
pub fn check_schema(schema: &scvi::survey::EncodingSchema) -> Result<usize, Vec<String>> {
    let mut cells = 0;
    let mut mismatches = Vec::new();
    for row in table() {
        for q in row.questions {
            for &(answer, score) in row.answers {
                cells += 1;
                match schema.encode_in(row.dimension, q, answer) {
                    Ok(a) if a == expected(score) => {}
                    other => mismatches.push(format!("{:?} {q} {answer:?}: {other:?}", row.dimension)),
                }
            }
        }
    }
    let in_schema = schema.rules().count();
    if in_schema != cells {
        mismatches.push(format!("schema has {in_schema} rules, transcription has {cells} cells"));
    }
    if mismatches.is_empty() {
        Ok(cells)
    } else {
        Err(mismatches)
    }
}
