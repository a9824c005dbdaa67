//! Published per-case weight bounds used as acceptance targets.

pub const CASE_BOUNDS_SQUARE: [(u32, &str); 17] = [
    (1, "2.088447879968511"),
    (2, "1.9438375658626355"),
    (3, "2.0109397168059324"),
    (4, "1.9607242494316246"),
    (5, "1.9942453743436321"),
    (6, "1.9875046382360564"),
    (7, "1.9554146240072456"),
    (8, "1.9441281429162531"),
    (9, "2.0884478982863968"),
    (10, "2.0884277288254993"),
    (11, "2.088445077308426"),
    (12, "2.0876840226666538"),
    (13, "2.0847781920964583"),
    (14, "2.07732977965866"),
    (15, "2.0656430335436333"),
    (16, "2.0437751234561317"),
    (17, "2.088086287477056"),
];

pub const CASE_BOUNDS_CUBE: [(u32, &str); 17] = [
    (1, "2.5731896581108735"),
    (2, "2.45464218336544"),
    (3, "2.475823071455533"),
    (4, "2.455719344199358"),
    (5, "2.5115525001235937"),
    (6, "2.5339175799806912"),
    (7, "2.5016302664189443"),
    (8, "2.493821911539605"),
    (9, "2.5734762658161277"),
    (10, "2.5593413871191126"),
    (11, "2.5567398601707696"),
    (12, "2.557631911023032"),
    (13, "2.5498950440578287"),
    (14, "2.5226265870712448"),
    (15, "2.527717407098689"),
    (16, "2.5385458044738085"),
    (17, "2.5718658072279847"),
];
