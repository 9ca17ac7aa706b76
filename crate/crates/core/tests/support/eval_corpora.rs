//! Constructed scoring corpora with hand-computed precision, recall and F1.

pub struct Corpus {
    pub name: &'static str,
    pub parsed: &'static [&'static str],
    pub truth: &'static [&'static str],
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub const CORPORA: &[Corpus] = &[
    Corpus {
        name: "sunfire-compute exact",
        parsed: &[
            "VM <.*> started on host <.*>",
            "VM <.*> stopped",
            "Disk <.*> attached to <.*>",
            "Disk <.*> detached",
            "Network interface <.*> up",
            "Network interface <.*> down",
            "Scheduler picked host <.*>",
            "Quota exceeded for tenant <.*>",
            "Heartbeat lost from <.*>",
        ],
        truth: &[
            "Heartbeat lost from <.*>",
            "Quota exceeded for tenant <.*>",
            "Scheduler picked host <.*>",
            "Network interface <.*> down",
            "Network interface <.*> up",
            "Disk <.*> detached",
            "Disk <.*> attached to <.*>",
            "VM <.*> stopped",
            "VM <.*> started on host <.*>",
        ],
        precision: 1.0,
        recall: 1.0,
        f1: 1.0,
    },
    Corpus {
        name: "half parsed correct, quarter recall",
        parsed: &["a <.*>", "zzz <.*>"],
        truth: &["a <.*>", "b <.*>", "c <.*>", "d <.*>"],
        precision: 0.5,
        recall: 0.25,
        f1: 1.0 / 3.0,
    },
    Corpus {
        name: "nothing parsed",
        parsed: &[],
        truth: &["a <.*>"],
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    },
    Corpus {
        name: "nothing correct",
        parsed: &["x <.*>", "y"],
        truth: &["a <.*>", "b"],
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    },
    Corpus {
        name: "one underscore off",
        parsed: &["User_<.*>NotFound", "Guest_<.*>"],
        truth: &["User_<.*>_NotFound", "Guest_<.*>"],
        precision: 0.5,
        recall: 0.5,
        f1: 0.5,
    },
    Corpus {
        name: "wildcard bound differs",
        parsed: &["Took <.*> ms", "Took <.*>"],
        truth: &["Took <.*> ms"],
        precision: 0.5,
        recall: 1.0,
        f1: 2.0 / 3.0,
    },
    Corpus {
        name: "adjacent wildcards collapse",
        parsed: &["a <.*><.*> b", "c"],
        truth: &["a <.*> b", "c", "d"],
        precision: 1.0,
        recall: 2.0 / 3.0,
        f1: 0.8,
    },
    Corpus {
        name: "duplicates pair once",
        parsed: &["a", "a", "a"],
        truth: &["a", "b"],
        precision: 1.0 / 3.0,
        recall: 0.5,
        f1: 0.4,
    },
    Corpus {
        name: "duplicate truth",
        parsed: &["a", "a"],
        truth: &["a", "a", "a", "b"],
        precision: 1.0,
        recall: 0.5,
        f1: 2.0 / 3.0,
    },
    Corpus {
        name: "over-generalized",
        parsed: &["<.*> failed", "connect to <.*> failed", "x <.*>", "y <.*>", "z <.*>"],
        truth: &["connect to <.*> failed", "read from <.*> failed"],
        precision: 0.2,
        recall: 0.5,
        f1: 2.0 * 0.2 * 0.5 / 0.7,
    },
    Corpus {
        name: "three of four",
        parsed: &["p <.*>", "q <.*>", "r <.*>", "s"],
        truth: &["p <.*>", "q <.*>", "r <.*>", "t"],
        precision: 0.75,
        recall: 0.75,
        f1: 0.75,
    },
    Corpus {
        name: "empty both",
        parsed: &[],
        truth: &[],
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    },
];
