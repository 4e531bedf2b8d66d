//! License identification helpers shared by the repository collectors.

/// SPDX ids of OSI-approved licenses.
pub const OSI_APPROVED: &[&str] = &[
    "0BSD", "AAL", "AFL-3.0", "AGPL-3.0", "AGPL-3.0-only", "AGPL-3.0-or-later", "APL-1.0",
    "APSL-2.0", "Apache-1.1", "Apache-2.0", "Artistic-1.0", "Artistic-2.0", "BSD-1-Clause",
    "BSD-2-Clause", "BSD-2-Clause-Patent", "BSD-3-Clause", "BSD-3-Clause-LBNL", "BSL-1.0",
    "BlueOak-1.0.0", "CAL-1.0", "CATOSL-1.1", "CDDL-1.0", "CECILL-2.1", "CERN-OHL-P-2.0",
    "CERN-OHL-S-2.0", "CERN-OHL-W-2.0", "CNRI-Python", "CPAL-1.0", "CUA-OPL-1.0", "ECL-1.0",
    "ECL-2.0", "EFL-2.0", "EPL-1.0", "EPL-2.0", "EUDatagrid", "EUPL-1.1", "EUPL-1.2",
    "Entessa", "Fair", "Frameworx-1.0", "GPL-2.0", "GPL-2.0-only", "GPL-2.0-or-later",
    "GPL-3.0", "GPL-3.0-only", "GPL-3.0-or-later", "HPND", "IPA", "IPL-1.0", "ISC",
    "LGPL-2.0-only", "LGPL-2.0-or-later", "LGPL-2.1", "LGPL-2.1-only", "LGPL-2.1-or-later",
    "LGPL-3.0", "LGPL-3.0-only", "LGPL-3.0-or-later", "LPL-1.02", "LPPL-1.3c", "MIT",
    "MIT-0", "MPL-1.0", "MPL-1.1", "MPL-2.0", "MPL-2.0-no-copyleft-exception", "MS-PL",
    "MS-RL", "MirOS", "Motosoto", "MulanPSL-2.0", "Multics", "NASA-1.3", "NCSA", "NGPL",
    "NPOSL-3.0", "NTP", "Naumen", "Nokia", "OCLC-2.0", "OFL-1.1", "OGTSL", "OLDAP-2.8",
    "OSET-PL-2.1", "OSL-1.0", "OSL-2.0", "OSL-2.1", "OSL-3.0", "PHP-3.0", "PHP-3.01",
    "PostgreSQL", "Python-2.0", "QPL-1.0", "RPL-1.1", "RPL-1.5", "RPSL-1.0", "RSCPL",
    "SISSL", "SPL-1.0", "SimPL-2.0", "Sleepycat", "UCL-1.0", "UPL-1.0", "Unicode-DFS-2016",
    "Unlicense", "VSL-1.0", "W3C", "Watcom-1.0", "Xnet", "ZPL-2.0", "ZPL-2.1", "Zlib",
];

pub fn is_osi_approved(id: &str) -> bool {
    OSI_APPROVED.contains(&id)
}

/// Text fragments identifying common license texts. Every fragment of an
/// entry must occur (case-insensitive, whitespace-collapsed). Order matters:
/// the first matching entry wins.
const FINGERPRINTS: &[(&str, &[&str])] = &[
    ("AGPL-3.0-only", &["gnu affero general public license", "version 3"]),
    ("LGPL-3.0-only", &["gnu lesser general public license", "version 3"]),
    ("LGPL-2.1-only", &["gnu lesser general public license", "version 2.1"]),
    ("GPL-3.0-only", &["gnu general public license", "version 3"]),
    ("GPL-2.0-only", &["gnu general public license", "version 2"]),
    ("Apache-2.0", &["apache license", "version 2.0"]),
    ("MPL-2.0", &["mozilla public license version 2.0"]),
    ("EUPL-1.2", &["european union public licence", "v. 1.2"]),
    ("EPL-2.0", &["eclipse public license - v 2.0"]),
    ("BSL-1.0", &["boost software license - version 1.0"]),
    ("CC0-1.0", &["cc0 1.0 universal"]),
    ("CC-BY-4.0", &["attribution 4.0 international"]),
    ("Unlicense", &["this is free and unencumbered software released into the public domain"]),
    ("BSD-3-Clause", &["redistribution and use in source and binary forms", "neither the name"]),
    ("BSD-2-Clause", &["redistribution and use in source and binary forms"]),
    ("MIT", &["permission is hereby granted, free of charge"]),
    ("ISC", &["permission to use, copy, modify, and/or distribute this software"]),
    ("Zlib", &["this software is provided 'as-is'", "altered source versions must be plainly marked"]),
];

fn collapse(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Guesses the SPDX id of a license text. An explicit SPDX tag wins over
/// fingerprints.
pub fn identify_license_text(text: &str) -> Option<String> {
    if let Some(id) = spdx_tag_ids(text).into_iter().next() {
        return Some(id);
    }
    let flat = collapse(text);
    FINGERPRINTS
        .iter()
        .find(|(_, frags)| frags.iter().all(|f| flat.contains(f)))
        .map(|(id, _)| id.to_string())
}

const TAG: &str = "SPDX-License-Identifier:";

/// License ids named in `SPDX-License-Identifier:` tags of `text`, in order of
/// appearance, without operators.
pub fn spdx_tag_ids(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        let Some(pos) = line.find(TAG) else { continue };
        let expr = &line[pos + TAG.len()..];
        let expr = expr
            .trim()
            .trim_end_matches("-->")
            .trim_end_matches("*/")
            .trim_end_matches("#}")
            .trim_end_matches("\"")
            .trim_end_matches("\",");
        for token in expr.split(|c: char| c.is_whitespace() || c == '(' || c == ')') {
            let token = token.trim_matches(|c: char| !(c.is_ascii_alphanumeric() || "-.+".contains(c)));
            if token.is_empty() || matches!(token, "AND" | "OR" | "WITH") {
                continue;
            }
            let id = token.trim_end_matches('+').to_string();
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    out
}

/// Splits an SPDX expression (as found in REUSE.toml or dep5 files) into ids.
pub fn expression_ids(expr: &str) -> Vec<String> {
    spdx_tag_ids(&format!("{TAG} {expr}"))
}
