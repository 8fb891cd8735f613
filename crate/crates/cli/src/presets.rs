//! Scenario files for the figures, compiled into the binary.

pub const PRESETS: [(&str, &str); 5] = [
    ("fig3", include_str!("../presets/fig3.cfg")),
    ("fig4", include_str!("../presets/fig4.cfg")),
    ("fig5", include_str!("../presets/fig5.cfg")),
    ("fig6", include_str!("../presets/fig6.cfg")),
    ("fig7", include_str!("../presets/fig7.cfg")),
];

pub fn preset(id: &str) -> Option<&'static str> {
    let id = id.trim_start_matches("fig");
    PRESETS.iter().find(|(name, _)| name[3..] == *id).map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}
