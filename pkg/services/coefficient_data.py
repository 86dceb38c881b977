"""
Сырые целочисленные таблицы коэффициентов.

Здесь только данные, без арифметики: services.exact_core собирает из них
точные рациональные значения. Порядок хранения указан у каждой таблицы.
"""

# --- СОБСТВЕННЫЕ ЗНАЧЕНИЯ ---
# m -> (p_m, коэффициенты d_m по убыванию степеней n^: n^m, n^(m-2), ...)
# lambda^(m) = -d_m / 2**p_m
EIGENVALUE_TERMS: dict[int, tuple[int, tuple[int, ...]]] = {
    2: (6, (1, 1)),
    3: (11, (1, 3)),
    4: (17, (5, 34, 9)),
    5: (23, (33, 410, 405)),
    6: (27, (63, 1260, 2943, 486)),
    7: (33, (527, 15617, 69001, 41607)),
    8: (40, (9387, 388780, 2845898, 4021884, 506979)),
    9: (47, (175045, 9702612, 107798166, 288161796, 130610637)),
    10: (51, (422565, 30315780, 480439190, 2135766820, 2249346285, 238353840)),
    11: (57, (4194753, 379291385, 8186829426, 55529955498, 110241863469, 41540033277)),
    12: (
        61,
        (10645960, 1187264199, 33678377895, 327725946398, 1081358909790, 940077055035, 88258370067),
    ),
    13: (
        69,
        (
            440374207,
            59495737574,
            2155821044201,
            28738150160500,
            144821249264769,
            236410740537606,
            78243613727607,
        ),
    ),
    14: (
        72,
        (
            578183175,
            93209584104,
            4215683624295,
            74269604367684,
            537905750769429,
            1456767306013752,
            1105711550410653,
            94839535889532,
        ),
    ),
    15: (
        79,
        (
            12308013927,
            2337227706555,
            129437253243675,
            2928506455684095,
            29119560960614085,
            120372998803922241,
            170921920649402745,
            51316344023990085,
        ),
    ),
    16: (
        87,
        (
            530039126159,
            117243302735480,
            7823093961425652,
            222043810819026856,
            2924952921130025194,
            17380315268028265224,
            40851669411526600980,
            27983551470330365784,
            2235152520630714879,
        ),
    ),
}

# Основное состояние n = 0, порядки 17..31: m -> (числитель, степень двойки),
# lambda_0^(m) = -числитель / 2**степень
GROUND_STATE_TERMS: dict[int, tuple[int, int]] = {
    17: (363372562420411197, 79),
    18: (6258692522467212813, 83),
    19: (227867608383920243815, 88),
    20: (4372199488222446620121, 92),
    21: (352807992522448740907163, 98),
    22: (7465886451386334274097895, 102),
    23: (330752735437897260202410959, 107),
    24: (7654237307570898665851927581, 111),
    25: (1477812451863756884805687589129, 118),
    26: (37132718819258763418452357390369, 122),
    27: (1939848955425261040700592191917783, 128),
    28: (52598573101029275526869814635336865, 131),
    29: (5914101566562517015636997146651378649, 137),
    30: (172129355454985486683952198830698506149, 141),
    31: (10362392343003738344189045786484697182753, 146),
}

# Коэффициент при omega^30 x^2 для n = 0, т.е. alpha_{1,30}
GROUND_STATE_ALPHA_1_30 = (
    -5207328980459439428858189871778019425519567564728193,
    2765292404617797269550429065808396826741571584,
)

# --- ЭКСПОНЕНЦИАЛЬНАЯ ЧАСТЬ ---
# delta = l - k -> (степень двойки без -2k, обычная часть, делитель Г-части, Г-часть).
# Каждая часть: кортеж (степень n^, коэффициенты полинома по k по возрастанию, делитель).
# alpha_{k,k+delta} = (-1)^k 2^(shift-2k) [plain + r(k,delta)/gamma_divisor * gamma]
ALPHA_FAMILIES: dict[int, tuple[int, tuple, int, tuple]] = {
    2: (
        -4,
        ((1, (1,), 1),),
        24,
        ((0, (3, 52, 40), 1), (2, (9, 12), 1)),
    ),
    3: (
        -9,
        ((0, (-1, 7, 5), 1), (2, (3, 4), 1)),
        24,
        ((1, (243, 1119, 1928, 1376, 320), 1), (3, (33, 101, 104, 32), 1)),
    ),
    4: (
        -14,
        ((1, (53, 120, 136, 40), 1), (3, (37, 72, 32), 3)),
        48,
        (
            (0, (-2612925, -5292132, 10675063, 36766856, 40148416, 21300608, 5544448, 565760), 315),
            (2, (11070, 60044, 130810, 142112, 81280, 23168, 2560), 1),
            (4, (585, 2288, 3585, 2696, 960, 128), 1),
        ),
    ),
    5: (
        -20,
        (
            (0, (-5187, -672, 6580, 7684, 3164, 452), 3),
            (2, (1214, 3744, 4080, 1968, 320), 1),
            (4, (345, 808, 576, 128), 3),
        ),
        48,
        (
            (
                1,
                (
                    740893230,
                    3944788389,
                    9627147810,
                    14943869467,
                    15287941200,
                    10116675072,
                    4238798592,
                    1079918592,
                    152076288,
                    9052160,
                ),
                315,
            ),
            (
                3,
                (1825740, 11037114, 27955236, 37919062, 30169312, 14491648, 4122880, 636928, 40960),
                3,
            ),
            (5, (85050, 381087, 729798, 752369, 447024, 152576, 27648, 2048), 5),
        ),
    ),
    6: (
        -26,
        (
            (1, (378033, 496368, 786528, 710816, 339904, 79552, 7232), 3),
            (3, (69714, 241312, 303392, 177696, 49408, 5120), 3),
            (5, (17217, 45360, 40960, 15360, 2048), 15),
        ),
        180,
        (
            (
                0,
                (
                    -24640192386810,
                    -105728184475128,
                    -155775948330744,
                    -74654535511116,
                    74660144680858,
                    156803802177352,
                    134434233033760,
                    70722102090816,
                    24590691451392,
                    5680345583616,
                    839668527104,
                    71921254400,
                    2714009600,
                ),
                9009,
            ),
            (
                2,
                (
                    22093103970,
                    162201234402,
                    504160865145,
                    882850470198,
                    986932878421,
                    745434338828,
                    388089936864,
                    138972684672,
                    33504543744,
                    5179637760,
                    462565376,
                    18104320,
                ),
                21,
            ),
            (
                4,
                (
                    152041050,
                    991922940,
                    2784482730,
                    4353707520,
                    4203836660,
                    2632731680,
                    1088777440,
                    294912320,
                    50245120,
                    4874240,
                    204800,
                ),
                1,
            ),
            (
                6,
                (2606310, 12799746, 27798345, 34245070, 26181505, 12857468, 4055200, 792320, 87040, 4096),
                1,
            ),
        ),
    ),
}

# Отдельные значения вне семейств delta <= 6:
# (k, l) -> группы (знак, делитель, {степень n^: коэффициент})
ALPHA_EXTRAS: dict[tuple[int, int], tuple[tuple[int, int, dict[int, int]], ...]] = {
    (1, 8): (
        (-1, 2**37, {1: 505549159, 3: 177209155, 5: 8289645, 7: 40329}),
        (-1, 2**32, {0: -2741702, 2: 12248825, 4: 1518052, 6: 26073}),
    ),
    (1, 9): (
        (-1, 3 * 2**47, {0: -840819020949, 2: 1419128841068, 4: 221074444682, 6: 6195597884, 8: 21259875}),
        (-1, 2**38, {1: 1318785849, 3: 459389255, 5: 29718111, 7: 335617}),
    ),
    (2, 9): (
        (1, 2**44, {1: 131257276187, 3: 37843099187, 5: 1323046497, 7: 4456305}),
        (1, 2**34, {0: 48228434, 2: 93959845, 4: 8787700, 6: 110661}),
    ),
}

# --- ПОЛИНОМИАЛЬНАЯ ЧАСТЬ ---
# l -> (знаменатель, строки по степеням k' = 0, 1, ...; в строке коэффициенты при k^1, k^2, ...)
BETA_EVEN: dict[int, tuple[int, tuple[tuple[int, ...], ...]]] = {
    2: (48, ((3, -1), (10,))),
    3: (23040, ((855, -64, -14, 5), (784, 48, -100), (1316, 500))),
    4: (
        23224320,
        (
            (371385, -203498, -12129, 1438),
            (1110698, 102042, -26252),
            (496932, 93984),
            (560200,),
        ),
    ),
    5: (
        22295347200,
        (
            (278751375, -202014918, 35222268, 4026748, 28158, -9944),
            (713250468, -281790420, -61452368, -196176, 209856),
            (1105743252, 198178852, -10630680, -275344),
            (319197168, 81282336, -22799744),
            (271672512, 148408976),
        ),
    ),
    6: (
        11771943321600,
        (
            (134035780725, -166751340588, 39327194883, -2269605874, -477614210, -19226552, 221782, 484),
            (413990823078, -217584747090, 22678956764, 8841166604, 479019924, -6549884, 566984),
            (526339688532, -155591533528, -55003198072, -3518713436, 85514000, -24903296),
            (556945898088, 131085561976, 2790556248, -280060176, 424040144),
            (116760015552, 34523271136, -5865150192, -3338174576),
            (79966766400, 46102886720, 10162787360),
        ),
    ),
    7: (
        1542595452862464000,
        (
            (
                21167446950775125,
                -34318046368345140,
                13674300462898392,
                -1352901404372446,
                -2843855572731,
                11311875159790,
                704407032828,
                12949326156,
                -177366189,
                37677640,
            ),
            (
                59570630372492640,
                -60644270495554704,
                10066261151648252,
                104602336760652,
                -246415137367020,
                -20207362771548,
                -460168946016,
                2604105504,
                -2483040560,
            ),
            (
                99669485611466412,
                -39020273844707836,
                2200698814542984,
                2070713072954600,
                212428368788100,
                5622413614220,
                82814211480,
                70784553840,
            ),
            (
                82488078028378080,
                -18442822328400480,
                -9100818756007520,
                -964844434165920,
                -24156442527360,
                -3013682511840,
                -1116228072960,
            ),
            (
                66588038149135200,
                18345507366303440,
                1191268975557840,
                10518809509520,
                42474114642960,
                10244315921840,
            ),
            (
                10839030004200960,
                3516288982521792,
                -363895953410496,
                -304221200739456,
                -51610667908800,
            ),
            (6218212960526208, 3705496740373376, 898601964676416, 110684037464000),
        ),
    ),
}

# Добавка для нечётных n (k' = (n-1)/2), тот же формат
BETA_ODD: dict[int, tuple[int, tuple[tuple[int, ...], ...]]] = {
    2: (12, ((1,),)),
    3: (11520, ((249, 49, -20), (532, 200))),
    4: (3870720, ((67680, 12347, -2602), (108544, 33762), (114456,))),
    5: (
        11147673600,
        (
            (119817225, -23468037, -12060122, -330312, 100198),
            (436319556, 103769756, -5886336, -1921112),
            (321608148, 118383396, -904080),
            (224147856, 120486304),
        ),
    ),
    6: (
        5885971660800,
        (
            (34460588160, -26910050283, 72069996, 1282383895, 103465570, -948002, -316976),
            (216801198648, -21671791146, -18471533106, -1699322576, 78651584, 5865684),
            (345295895928, 96181762100, 1478206984, -1409258180, 60822872),
            (160052617776, 64547633160, 3204992824, -1898232512),
            (83156900448, 47130830560, 10276562912),
        ),
    ),
    7: (
        257099242143744000,
        (
            (
                -460686821541975,
                -1941941074537755,
                366877584331212,
                41494582964306,
                -9965970910165,
                -1112954021925,
                -34972438722,
                958101144,
                3798795,
            ),
            (
                9145976126266080,
                -3823250702059872,
                -191143081971676,
                173415983605096,
                24948282593576,
                815890000796,
                -41300603344,
                1974092120,
            ),
            (
                19045045703842332,
                -607795420829248,
                -1422456568355676,
                -195873935369616,
                -2655255816252,
                611948653316,
                -98001423520,
            ),
            (
                18941405236672032,
                5863460843089248,
                345511721120640,
                -55753844615456,
                -654723253184,
                1792716525600,
            ),
            (
                6296099301099168,
                2692631923242160,
                232744611197904,
                -59049744898144,
                -14606140268720,
            ),
            (2605202959125888, 1525593370591680, 365590616623232, 44670372947200),
        ),
    ),
}

MAX_BETA_ORDER = max(BETA_EVEN)
MAX_EIGENVALUE_ORDER = max(EIGENVALUE_TERMS)
MAX_GROUND_STATE_ORDER = max(GROUND_STATE_TERMS)
