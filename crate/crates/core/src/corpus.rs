//! Bundled example inputs.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    System,
    Framework,
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub kind: Kind,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal, $kind:ident) => {
        Entry {
            name: $name,
            kind: Kind::$kind,
            text: include_str!(concat!("../corpus/", $name, ".json")),
        }
    };
}

pub const ENTRIES: &[Entry] = &[
    entry!("example1", System),
    entry!("example2", System),
    entry!("cubic", System),
    entry!("product", System),
    entry!("example3", System),
    entry!("example4", System),
    entry!("circle", System),
    entry!("triangle", Framework),
    entry!("square", Framework),
    entry!("braced_square", Framework),
    entry!("k4", Framework),
    entry!("collinear_triangle", Framework),
    entry!("collinear_k4", Framework),
    entry!("bricard", Framework),
];

pub fn get(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}
