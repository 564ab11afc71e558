"""Orthonormal low-pass filter taps (reconstruction convention, h[0] first).

Values are the standard Daubechies and least-asymmetric (Symmlet) tables.
The published sym4 to sym8 entries carry ~1e-12 rounding; they were
polished once by Newton iteration in 50-digit arithmetic on the defining
system (sum sqrt(2), shift orthonormality, vanishing moments).  All taps are
validated against the orthonormality and vanishing-moment
identities in the test-suite rather than trusted blindly.
"""

LOWPASS = {
    'haar': (
        0.7071067811865476,
        0.7071067811865476,
    ),
    'db2': (
        0.48296291314453416,
        0.8365163037378079,
        0.2241438680420134,
        -0.12940952255126037,
    ),
    'db3': (
        0.33267055295008263,
        0.8068915093110925,
        0.45987750211849154,
        -0.13501102001025458,
        -0.08544127388202666,
        0.03522629188570953,
    ),
    'db4': (
        0.2303778133088965,
        0.7148465705529157,
        0.6308807679298589,
        -0.027983769416859854,
        -0.18703481171909309,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ),
    'db5': (
        0.16010239797419293,
        0.6038292697971896,
        0.7243085284377729,
        0.13842814590132074,
        -0.24229488706638203,
        -0.032244869584638375,
        0.07757149384004572,
        -0.006241490212798274,
        -0.012580751999081999,
        0.0033357252854737712,
    ),
    'db6': (
        0.11154074335010947,
        0.49462389039845306,
        0.7511339080210954,
        0.31525035170919763,
        -0.22626469396543983,
        -0.12976686756726194,
        0.09750160558732304,
        0.027522865530305727,
        -0.03158203931748603,
        0.0005538422011614961,
        0.004777257510945511,
        -0.0010773010853084796,
    ),
    'db7': (
        0.07785205408500918,
        0.3965393194819173,
        0.7291320908462351,
        0.4697822874051931,
        -0.14390600392856498,
        -0.22403618499387498,
        0.07130921926683026,
        0.08061260915108308,
        -0.03802993693501441,
        -0.01657454163066688,
        0.01255099855609984,
        0.0004295779729213665,
        -0.0018016407040474908,
        0.00035371379997452024,
    ),
    'db8': (
        0.05441584224310401,
        0.31287159091429995,
        0.6756307362972898,
        0.5853546836542067,
        -0.015829105256349306,
        -0.2840155429615469,
        0.0004724845739132828,
        0.12874742662047847,
        -0.017369301001807547,
        -0.044088253930794755,
        0.013981027917398282,
        0.008746094047405777,
        -0.004870352993451574,
        -0.00039174037337694705,
        0.0006754494064505693,
        -0.00011747678412476953,
    ),
    'db9': (
        0.038077947363878345,
        0.24383467461259034,
        0.6048231236901112,
        0.6572880780513005,
        0.13319738582500756,
        -0.2932737832791749,
        -0.09684078322297646,
        0.14854074933810638,
        0.03072568147933338,
        -0.06763282906132997,
        0.00025094711483145197,
        0.022361662123679096,
        -0.004723204757751397,
        -0.00428150368246343,
        0.0018476468830562265,
        0.00023038576352319597,
        -0.0002519631889427101,
        3.93473203162716e-05,
    ),
    'db10': (
        0.026670057900555554,
        0.1881768000776915,
        0.5272011889317256,
        0.6884590394536035,
        0.2811723436605775,
        -0.24984642432731538,
        -0.19594627437737705,
        0.12736934033579325,
        0.09305736460357235,
        -0.07139414716639708,
        -0.029457536821875813,
        0.033212674059341,
        0.0036065535669561697,
        -0.010733175483330575,
        0.001395351747052901,
        0.001992405295185056,
        -0.0006858566949597116,
        -0.00011646685512928545,
        9.358867032006959e-05,
        -1.3264202894521244e-05,
    ),
    'sym4': (
        0.03222310060405406,
        -0.012603967262034516,
        -0.09921954357662964,
        0.29785779560531617,
        0.8037387518051333,
        0.4976186676327669,
        -0.029635527646008054,
        -0.07576571478950322,
    ),
    'sym5': (
        0.01953888273525873,
        -0.021101834024703878,
        -0.17532808990807136,
        0.016602105764511668,
        0.6339789634567955,
        0.7234076904040337,
        0.1993975339768552,
        -0.039134249302301465,
        0.02951949092571595,
        0.027333068345000974,
    ),
    'sym6': (
        -0.007800708325025112,
        0.0017677118642450802,
        0.04472490177078673,
        -0.021060292512352304,
        -0.0726375227864073,
        0.33792942172808804,
        0.7876411410286391,
        0.4910559419280461,
        -0.04831174258564734,
        -0.11799011114852581,
        0.0034907120842069084,
        0.015404109327040953,
    ),
    'sym7': (
        0.010268176708476991,
        0.004010244871517111,
        -0.10780823770331696,
        -0.1400472404429931,
        0.288629631750586,
        0.7677643170048661,
        0.5361019170906053,
        0.01744125508689161,
        -0.04955283493700124,
        0.06789269350123701,
        0.030515513165881025,
        -0.012636303403238187,
        -0.0010473848886773812,
        0.0026818145682608262,
    ),
    'sym8': (
        0.0018899503327734653,
        -0.0003029205147315696,
        -0.014952258337059793,
        0.0038087520139143687,
        0.0491371796737173,
        -0.027219029917142232,
        -0.051945838107796745,
        0.3644418948363743,
        0.7771857516996549,
        0.4813596512588593,
        -0.0612733590679497,
        -0.14329423835124785,
        0.007607487325024407,
        0.031695087811525254,
        -0.0005421323318121717,
        -0.0033824159510081773,
    ),
    'sym9': (
        0.0010694900329086053,
        -0.0004731544986800831,
        -0.010264064027633142,
        0.008859267493400484,
        0.06207778930288603,
        -0.018233770779395985,
        -0.19155083129728512,
        0.035272488035271894,
        0.6173384491409358,
        0.717897082764412,
        0.238760914607303,
        -0.05456895843083407,
        0.0005834627461258068,
        0.03022487885827568,
        -0.01152821020767923,
        -0.013271967781817119,
        0.0006197808889855868,
        0.0014009155259146807,
    ),
    'sym10': (
        -0.0004593294210046588,
        5.7036083618494284e-05,
        0.004593173585311828,
        -0.0008043589320165449,
        -0.02035493981231129,
        0.005764912033581909,
        0.04999497207737669,
        -0.0319900568824278,
        -0.03553674047381755,
        0.38382676106708546,
        0.7695100370211071,
        0.47169066693843925,
        -0.07088053578324385,
        -0.15949427888491757,
        0.011609893903711381,
        0.0459272392310922,
        -0.0014653825813050513,
        -0.008641299277022422,
        9.563267072289475e-05,
        0.0007701598091144901,
    ),
}

VANISHING_MOMENTS = {
    'haar': 1,
    'db2': 2,
    'db3': 3,
    'db4': 4,
    'db5': 5,
    'db6': 6,
    'db7': 7,
    'db8': 8,
    'db9': 9,
    'db10': 10,
    'sym4': 4,
    'sym5': 5,
    'sym6': 6,
    'sym7': 7,
    'sym8': 8,
    'sym9': 9,
    'sym10': 10,
}
