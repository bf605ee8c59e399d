//! US states plus the District of Columbia, with positions on an 11x8 tile
//! grid used by the choropleth renderer.

/// `(code, name, column, row)`
pub const STATES: [(&str, &str, u8, u8); 51] = [
    ("AK", "Alaska", 0, 0),
    ("AL", "Alabama", 6, 6),
    ("AR", "Arkansas", 4, 5),
    ("AZ", "Arizona", 1, 5),
    ("CA", "California", 0, 4),
    ("CO", "Colorado", 2, 4),
    ("CT", "Connecticut", 9, 3),
    ("DC", "District of Columbia", 8, 5),
    ("DE", "Delaware", 9, 4),
    ("FL", "Florida", 8, 7),
    ("GA", "Georgia", 7, 6),
    ("HI", "Hawaii", 0, 7),
    ("IA", "Iowa", 4, 3),
    ("ID", "Idaho", 1, 2),
    ("IL", "Illinois", 5, 2),
    ("IN", "Indiana", 5, 3),
    ("KS", "Kansas", 3, 5),
    ("KY", "Kentucky", 5, 4),
    ("LA", "Louisiana", 4, 6),
    ("MA", "Massachusetts", 10, 2),
    ("MD", "Maryland", 8, 4),
    ("ME", "Maine", 10, 0),
    ("MI", "Michigan", 7, 2),
    ("MN", "Minnesota", 4, 2),
    ("MO", "Missouri", 4, 4),
    ("MS", "Mississippi", 5, 6),
    ("MT", "Montana", 2, 2),
    ("NC", "North Carolina", 6, 5),
    ("ND", "North Dakota", 3, 2),
    ("NE", "Nebraska", 3, 4),
    ("NH", "New Hampshire", 10, 1),
    ("NJ", "New Jersey", 8, 3),
    ("NM", "New Mexico", 2, 5),
    ("NV", "Nevada", 1, 3),
    ("NY", "New York", 8, 2),
    ("OH", "Ohio", 6, 3),
    ("OK", "Oklahoma", 3, 6),
    ("OR", "Oregon", 0, 3),
    ("PA", "Pennsylvania", 7, 3),
    ("RI", "Rhode Island", 9, 2),
    ("SC", "South Carolina", 7, 5),
    ("SD", "South Dakota", 3, 3),
    ("TN", "Tennessee", 5, 5),
    ("TX", "Texas", 3, 7),
    ("UT", "Utah", 1, 4),
    ("VA", "Virginia", 7, 4),
    ("VT", "Vermont", 9, 1),
    ("WA", "Washington", 0, 2),
    ("WI", "Wisconsin", 6, 2),
    ("WV", "West Virginia", 6, 4),
    ("WY", "Wyoming", 2, 3),
];

pub const GRID_COLUMNS: u8 = 11;
pub const GRID_ROWS: u8 = 8;

/// Resolves a two-letter code or a full state name (case-insensitive) to the
/// canonical two-letter code.
pub fn state_code(key: &str) -> Option<&'static str> {
    let key = key.trim();
    STATES
        .iter()
        .find(|(code, name, _, _)| code.eq_ignore_ascii_case(key) || name.eq_ignore_ascii_case(key))
        .map(|(code, _, _, _)| *code)
}

pub fn state_name(code: &str) -> Option<&'static str> {
    STATES
        .iter()
        .find(|(c, _, _, _)| *c == code)
        .map(|(_, n, _, _)| *n)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn grid_cells_are_unique_and_in_bounds() {
        let mut cells = HashSet::new();
        for (_, _, c, r) in STATES {
            assert!(c < GRID_COLUMNS && r < GRID_ROWS);
            assert!(cells.insert((c, r)));
        }
        let codes: HashSet<_> = STATES.iter().map(|s| s.0).collect();
        assert_eq!(codes.len(), 51);
    }

    #[test]
    fn lookup_by_code_or_name() {
        assert_eq!(state_code("ca"), Some("CA"));
        assert_eq!(state_code("District of Columbia"), Some("DC"));
        assert_eq!(state_code("north carolina"), Some("NC"));
        assert_eq!(state_code("Puerto Rico"), None);
        assert_eq!(state_name("AK"), Some("Alaska"));
    }
}
