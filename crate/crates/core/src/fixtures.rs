//! Named diagrams shipped with the crate (see `fixtures/*.led`).

use crate::diagram::{parse_le_diagram, LeDiagram};

pub const FIG2_LED: &str = include_str!("../fixtures/fig2.led");
pub const FIG3_LED: &str = include_str!("../fixtures/fig3.led");
pub const FIG4_LED: &str = include_str!("../fixtures/fig4.led");
pub const FIG5_LED: &str = include_str!("../fixtures/fig5.led");
pub const FIG7_LED: &str = include_str!("../fixtures/fig7.led");
pub const BLOCKS1_LED: &str = include_str!("../fixtures/blocks1.led");
pub const U12_LED: &str = include_str!("../fixtures/u12.led");
pub const TIE8_LED: &str = include_str!("../fixtures/tie8.led");

/// All fixtures by name.
pub const ALL: &[(&str, &str)] = &[
    ("FIG2", FIG2_LED),
    ("FIG3", FIG3_LED),
    ("FIG4", FIG4_LED),
    ("FIG5", FIG5_LED),
    ("FIG7", FIG7_LED),
    ("BLOCKS1", BLOCKS1_LED),
    ("U12", U12_LED),
    ("TIE8", TIE8_LED),
];

pub fn by_name(name: &str) -> Option<LeDiagram> {
    ALL.iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, text)| load(text))
}

fn load(text: &str) -> LeDiagram {
    parse_le_diagram(text).expect("shipped fixture is valid")
}

pub fn fig2() -> LeDiagram {
    load(FIG2_LED)
}

pub fn fig3() -> LeDiagram {
    load(FIG3_LED)
}

pub fn fig4() -> LeDiagram {
    load(FIG4_LED)
}

pub fn fig5() -> LeDiagram {
    load(FIG5_LED)
}

pub fn fig7() -> LeDiagram {
    load(FIG7_LED)
}

pub fn blocks1() -> LeDiagram {
    load(BLOCKS1_LED)
}

pub fn u12() -> LeDiagram {
    load(U12_LED)
}

pub fn tie8() -> LeDiagram {
    load(TIE8_LED)
}
