//! Embedded numeric tables for the built-in parameter sets.
//! Generated once from the published tables; do not edit by hand.

/// Per-type red fractions, square packing (index 0 holds type 1).
pub(crate) const ALPHA_SQUARE: [&str; 151] = [
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0.11526431542309074",
    "0.17175402209391144",
    "0.14364948238440467",
    "0.17775964679070577",
    "0.16247599807416024",
    "0.17013150154133094",
    "0.17218382694021506",
    "0.17186065470253054",
    "0.1712411485735466",
    "0.17115325420709004",
    "0.011808683266528508",
    "0.08864616236688028",
    "0.0746578085809842",
    "0.1392973955221088",
    "0.20463684875950888",
    "0.11988863237025116",
    "0.1489855469399089",
    "0.42658319200096906",
    "0.3313855159770591",
    "0.26591984078589526",
    "0.23652286713889142",
    "0.17320945474790095",
    "0.2907287245318693",
    "0.27690915366279856",
    "0.35186597263941155",
    "0.28487022531216166",
    "0.3405383352070134",
    "0.13927977565087557",
    "0.12478043051170912",
    "0.17368906765817593",
    "0.049341692986982266",
    "0.21756972846743544",
    "0.15176378068862706",
    "0.27986004047748236",
    "0.09140290314421057",
    "0.16115290643799296",
    "0.10509477906408826",
    "0.07908677596102542",
    "0.06049271754448721",
    "0.027902842302122366",
    "0.03757222734769261",
    "0.044034294107809235",
    "0.04169873464584284",
    "0.045855398808323844",
    "0.03268220721227799",
    "0.020287554239005412",
    "0.03662245261759983",
    "0.05299014948250891",
    "0.05837546569384355",
    "0.06021197613253543",
    "0.05286287383333055",
    "0.041141831190207534",
    "0.025858702537442546",
    "0.03667621572334345",
    "0.05790545597682889",
    "0.0249935407107143",
    "0.05090633446809589",
    "0.04180489086300371",
    "0.0598352802367374",
    "0.04622400142944383",
    "0.06598393751625004",
    "0.015819026610491616",
    "0.014052365574156844",
    "0.019542717826361966",
    "0.02093163772726897",
    "0.03232182211334006",
    "0.035404672067686827",
    "0.04160032480693088",
    "0.03084632143248167",
    "0.03218274376106067",
    "0.027386520210324672",
    "0.0467579925718552",
    "0.03515363399072097",
    "0.009522308778970257",
    "0.050007623111272215",
    "0.027397549490475293",
    "0.040108142281991443",
    "0.04060265542768865",
    "0.06176115933187615",
    "0.05149748670123738",
    "0.030976848369531906",
    "0.04985378105030419",
    "0.02428257540185641",
    "0.039279772504672905",
    "0.018431969726226516",
    "0.01615117687134704",
    "0.033836619264623",
    "0.021684498478341585",
    "0.018653119555053665",
    "0.017510378838004492",
    "0.005027225774378641",
    "0.0050070660422215085",
    "0.008641122238781884",
    "0.0114109321956688",
    "0.00017017085816917188",
    "0.007227843412475732",
    "0.02380064289496081",
    "0.024626599428481333",
    "0.0002926203031912711",
    "0.00367483614722508",
    "0.003637542351726364",
    "0.0022174466541568516",
    "0.003972815375790473",
    "0.0063500940342546275",
    "0.0008190666659831924",
    "0.006404294461389681",
    "0.0772226658137164",
    "0.002848362891246903",
    "0.0012952627416890072",
    "0.017932379180303493",
    "0.007137167661640409",
    "0.03712900994359092",
    "0.0029178803264349185",
    "0.015565067465901694",
    "0.0007797083742386857",
    "0.045217214440781583",
    "0.0013741843692585687",
    "0.0003354018167419648",
    "0.0012121494697902024",
    "0.015325390110678683",
    "0.0028034548030816953",
    "0.0415339431984868",
    "0.002954384831987067",
    "0.028214095268082884",
    "0.008801691293012892",
    "0.011981667605959034",
    "0",
    "0.04442994587106425",
    "0.0025122969557108132",
    "0.005897723663266186",
    "0.0008298536197157702",
    "0.003146593473569992",
    "0.007423928474611485",
];

/// Per-type red fractions, cube packing.
pub(crate) const ALPHA_CUBE: [&str; 151] = [
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0",
    "0.23560671174940934",
    "0.24349456708719025",
    "0.011054757786850555",
    "0.09233137770530553",
    "0.10296544873687286",
    "0.09980866333707894",
    "0.11275956304754697",
    "0.10573246664180191",
    "0.21831169314212995",
    "0.16810602509149197",
    "0.28469363087983357",
    "0.46134537517964436",
    "0.4754821887062161",
    "0.4834778208599464",
    "0.38230203454521344",
    "0.20815458494242878",
    "0.2094357013281899",
    "0.6476643335428202",
    "0.4846417112019235",
    "0.3459551479018446",
    "0.1967822914561262",
    "0.22903844377204607",
    "0.38585033090166515",
    "0.2633509344925706",
    "0.37148866892244403",
    "0.3228819685751433",
    "0.294966161863426",
    "0.11613078486074929",
    "0.21976007519116803",
    "0.2367222519372697",
    "0.06874946889000572",
    "0.30801878565803864",
    "0.10874307802527139",
    "0.34382124885682674",
    "0.19822255924214388",
    "0.21657253679087018",
    "0.21064008575188697",
    "0.5286073975827003",
    "0.23593465027098925",
    "0.10627837309910759",
    "0.08778737037136902",
    "0.0628782883568702",
    "0.07892306409577904",
    "0.06811428634665145",
    "0.08934119933293255",
    "0.10985985543445637",
    "0.16657268323184893",
    "0.16370099694324725",
    "0.14763245122124014",
    "0.1671268810238925",
    "0.18510082544610912",
    "0.011723129997064097",
    "0.02425242847273701",
    "0.011268687510284647",
    "0.01566133856254459",
    "0.0023807218784999695",
    "0",
    "0.014065837749926702",
    "0.07665846642009927",
    "0.08912467432180055",
    "0.06724339050226902",
    "0.11390203480637812",
    "0.1529879344816335",
    "0.09257293559305935",
    "0.13375170776745032",
    "0.10899217160505548",
    "0.08961421224461213",
    "0.0870469166593813",
    "0.11967303625257314",
    "0.08625153412085623",
    "0.11468071689788334",
    "0.09031490851523155",
    "0.06420968479797878",
    "0.08246536630622064",
    "0.06735253993260948",
    "0.07986056987421691",
    "0.08506428649843378",
    "0.06921061897885533",
    "0.07888370245488946",
    "0.0730839676106615",
    "0.07882644193751703",
    "0.07855811096717208",
    "0.0755618507268449",
    "0.06683328717340548",
    "0.07109645510485962",
    "0.07686292296039537",
    "0.09207944256220246",
    "0.06792762522935986",
    "0.07184860065578008",
    "0.09077658256097626",
    "0.06892046751777886",
    "0.08404266181153941",
    "0.05725657878308299",
    "0.04505359172704221",
    "0.05865839976147119",
    "0.06098740030051164",
    "0.06750979580178162",
    "0.07232664164227215",
    "0.07155889973262747",
    "0.07655628977344214",
    "0.08531209453810662",
    "0.07272780537431511",
    "0.060692790181056167",
    "0.07565018146829666",
    "0.07435001036624961",
    "0.07641678559172299",
    "0.09172841413844901",
    "0.09045869915075516",
    "0.05284222333171534",
    "0.07194325920411004",
    "0.08907570891638156",
    "0.09267691307775361",
    "0.06180156823851851",
    "0.057769376722262844",
    "0.06774002323306783",
    "0.0751076759531758",
    "0.12059175834028163",
    "0.08660859544741523",
    "0.06185526343471609",
    "0.06456079230878453",
    "0.0636821969541907",
    "0.07602483985713077",
    "0.08915221681102126",
    "0.0984722500891399",
    "0.09067271353727313",
    "0.09414865557456398",
    "0.10168269428760995",
    "0.0909148528042305",
    "0.09549983384551514",
    "0.07970401566114022",
    "0.09550429166121593",
    "0.11367223296069545",
    "0.09621713402681015",
];

/// Cost-split parameter w per analysis case (cases 2..=16), square packing.
pub(crate) const W_SQUARE: [(u32, &str); 15] = [
    (2, "0.5218896004296165"),
    (3, "0.6367683021976823"),
    (4, "0.5508161595298383"),
    (5, "0.6081996168574735"),
    (6, "0.5966563767881228"),
    (7, "0.5417242692011557"),
    (8, "0.6988933681604961"),
    (9, "0.7677036830017706"),
    (10, "0.7691331237757477"),
    (11, "0.773230983786544"),
    (12, "0.7836563381680435"),
    (13, "0.7929071522802713"),
    (14, "0.8113137810136913"),
    (15, "0.8219971336489986"),
    (16, "0.872756492818088"),
];

/// Cost-split parameter w per analysis case (cases 2..=16), cube packing.
pub(crate) const W_CUBE: [(u32, &str); 15] = [
    (2, "0.3559465695997889"),
    (3, "0.3324106710303888"),
    (4, "0.3547433890555143"),
    (5, "0.29283548893321054"),
    (6, "0.2680609843073525"),
    (7, "0.30382397508342246"),
    (8, "0.42984690908567424"),
    (9, "0.7660334876156012"),
    (10, "0.7674343307466625"),
    (11, "0.773273461291727"),
    (12, "0.7932633383349649"),
    (13, "0.8240834379579076"),
    (14, "0.8470244201613557"),
    (15, "0.88618415266251"),
    (16, "0.9152418129618586"),
];

/// (beta, gamma) for the high-index types carried in the auxiliary table.
pub(crate) const BETA_GAMMA_TAIL: [(u32, u32, u32); 91] = [
    (55, 17, 5),
    (56, 18, 5),
    (57, 19, 5),
    (58, 20, 6),
    (59, 21, 6),
    (60, 22, 6),
    (61, 23, 6),
    (67, 27, 8),
    (68, 28, 8),
    (69, 29, 8),
    (70, 30, 9),
    (71, 31, 9),
    (72, 32, 9),
    (73, 33, 9),
    (75, 34, 10),
    (76, 35, 10),
    (77, 36, 10),
    (78, 37, 11),
    (79, 38, 11),
    (80, 39, 11),
    (81, 40, 12),
    (82, 41, 12),
    (83, 42, 12),
    (84, 43, 12),
    (85, 44, 13),
    (86, 45, 13),
    (87, 46, 13),
    (88, 47, 14),
    (89, 48, 14),
    (90, 49, 14),
    (91, 50, 15),
    (92, 51, 15),
    (93, 52, 15),
    (94, 53, 15),
    (95, 54, 16),
    (96, 55, 16),
    (97, 56, 16),
    (98, 57, 17),
    (99, 58, 17),
    (100, 59, 17),
    (101, 60, 18),
    (102, 61, 18),
    (103, 62, 18),
    (104, 63, 18),
    (105, 64, 19),
    (106, 65, 19),
    (107, 66, 19),
    (108, 67, 20),
    (109, 68, 20),
    (110, 69, 20),
    (111, 70, 21),
    (112, 71, 21),
    (113, 72, 21),
    (114, 73, 21),
    (115, 74, 22),
    (116, 75, 22),
    (117, 76, 22),
    (118, 77, 23),
    (119, 78, 23),
    (120, 79, 23),
    (121, 80, 24),
    (122, 81, 24),
    (123, 82, 24),
    (124, 83, 24),
    (125, 84, 25),
    (126, 85, 25),
    (127, 86, 25),
    (128, 87, 26),
    (129, 88, 26),
    (130, 89, 26),
    (131, 90, 27),
    (132, 91, 27),
    (133, 92, 27),
    (134, 92, 27),
    (135, 94, 28),
    (136, 95, 28),
    (137, 96, 28),
    (138, 97, 29),
    (139, 98, 29),
    (140, 98, 29),
    (141, 100, 30),
    (142, 101, 30),
    (143, 102, 30),
    (144, 103, 30),
    (145, 104, 31),
    (146, 105, 31),
    (147, 106, 31),
    (148, 107, 32),
    (149, 108, 32),
    (150, 109, 32),
    (151, 110, 33),
];
