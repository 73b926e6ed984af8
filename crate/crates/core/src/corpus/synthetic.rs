//! Seeded generator of small wet-lab-style protocols with standoff
//! annotations. Vocabulary overlaps between types on purpose (`pipette` is an
//! action and a device, numbers occur in amounts, concentrations and times),
//! so taggers trained on it disagree in realistic ways.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::document::{EntityMention, ProtocolDocument};
use super::standoff::StandoffDocument;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub documents: usize,
    pub min_steps: usize,
    pub max_steps: usize,
    /// Probability that a generated mention is left unannotated.
    pub label_noise: f64,
    pub seed: u64,
    pub id_prefix: String,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            documents: 30,
            min_steps: 4,
            max_steps: 10,
            label_noise: 0.05,
            seed: 1,
            id_prefix: "protocol_".to_string(),
        }
    }
}

const ACTION: &[&str] = &[
    "add",
    "mix",
    "incubate",
    "centrifuge",
    "transfer",
    "place",
    "vortex",
    "pipette",
    "remove",
    "wash",
    "resuspend",
    "store",
    "spin",
];
const REAGENT: &[&str] = &[
    "NaCl",
    "ethanol",
    "sodium chloride",
    "Tris buffer",
    "distilled water",
    "PBS",
    "lysis buffer",
    "master mix",
    "proteinase K",
    "supernatant",
    "elution buffer",
    "DNA",
];
const AMOUNT: &[&str] = &[
    "5 ml", "3.68 g", "100 µl", "2 drops", "10 µl", "1 ml", "50 µl", "0.5 g",
];
const CONCENTRATION: &[&str] = &["10 mM", "70 %", "1 M", "0.5 mg/ml", "100 mM"];
const LOCATION: &[&str] = &[
    "microcentrifuge tube",
    "ice",
    "water bath",
    "tube",
    "plate",
    "falcon tube",
    "fridge",
    "column",
];
const TEMPERATURE: &[&str] = &["37°C", "4°C", "room temperature", "95°C", "-20°C"];
const TIME: &[&str] = &["10 min", "5 minutes", "1 h", "30 s", "overnight", "2 min"];
const DEVICE: &[&str] = &[
    "centrifuge",
    "vortexer",
    "thermocycler",
    "pipette",
    "heat block",
];
const MODIFIER: &[&str] = &["gently", "carefully", "thoroughly", "briefly", "slowly"];
const TITLES: &[&str] = &[
    "Plasmid DNA extraction",
    "Bacterial transformation",
    "RNA isolation from cells",
    "Protein precipitation",
    "Gel electrophoresis",
    "Genomic DNA purification",
];

#[derive(Clone, Copy)]
enum Part {
    Text(&'static str),
    Entity(&'static str, &'static [&'static str]),
}

use Part::{Entity as E, Text as T};

const TEMPLATES: &[&[Part]] = &[
    &[
        E("Action", ACTION),
        E("Amount", AMOUNT),
        T("of"),
        E("Reagent", REAGENT),
        T("to the"),
        E("Location", LOCATION),
    ],
    &[
        E("Action", ACTION),
        T("at"),
        E("Temperature", TEMPERATURE),
        T("for"),
        E("Time", TIME),
    ],
    &[
        E("Action", ACTION),
        E("Modifier", MODIFIER),
        T("in the"),
        E("Location", LOCATION),
    ],
    &[
        E("Action", ACTION),
        T("with"),
        E("Amount", AMOUNT),
        T("of"),
        E("Concentration", CONCENTRATION),
        E("Reagent", REAGENT),
    ],
    &[
        E("Action", ACTION),
        T("the"),
        E("Reagent", REAGENT),
        T("using a"),
        E("Device", DEVICE),
    ],
    &[
        E("Action", ACTION),
        T("in the"),
        E("Device", DEVICE),
        T("for"),
        E("Time", TIME),
        T("at"),
        E("Temperature", TEMPERATURE),
    ],
    &[
        E("Modifier", MODIFIER),
        E("Action", ACTION),
        T("the"),
        E("Location", LOCATION),
    ],
    &[
        E("Action", ACTION),
        E("Reagent", REAGENT),
        T("on"),
        E("Location", LOCATION),
        T("for"),
        E("Time", TIME),
    ],
];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn synthetic_corpus(config: &SyntheticConfig) -> Vec<StandoffDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max_steps = config.max_steps.max(config.min_steps);
    (0..config.documents)
        .map(|d| {
            let mut text = String::new();
            let mut spans: Vec<(&str, usize, usize)> = Vec::new();
            let mut len = 0; // characters
            let title = TITLES.choose(&mut rng).copied().unwrap_or("Protocol");
            text.push_str(title);
            text.push('\n');
            len += title.chars().count() + 1;

            let steps = rng.random_range(config.min_steps..=max_steps);
            for _ in 0..steps {
                let template = TEMPLATES.choose(&mut rng).copied().unwrap_or(TEMPLATES[0]);
                for (k, part) in template.iter().enumerate() {
                    if k > 0 {
                        text.push(' ');
                        len += 1;
                    }
                    let (label, word) = match *part {
                        T(w) => (None, w),
                        E(label, lexicon) => {
                            (Some(label), *lexicon.choose(&mut rng).unwrap_or(&"x"))
                        }
                    };
                    let word = if k == 0 {
                        capitalize(word)
                    } else {
                        word.to_string()
                    };
                    let n = word.chars().count();
                    if let Some(label) = label {
                        if !rng.random_bool(config.label_noise.clamp(0.0, 1.0)) {
                            spans.push((label, len, len + n));
                        }
                    }
                    text.push_str(&word);
                    len += n;
                }
                text.push_str(".\n");
                len += 2;
            }

            let document = ProtocolDocument::new(format!("{}{:03}", config.id_prefix, d + 1), text);
            let mentions: Vec<EntityMention> = spans
                .into_iter()
                .map(|(l, s, e)| {
                    document
                        .mention(l, s, e)
                        .expect("generated spans are in range")
                })
                .collect();
            StandoffDocument {
                document,
                mentions,
                skipped: 0,
            }
        })
        .collect()
}
