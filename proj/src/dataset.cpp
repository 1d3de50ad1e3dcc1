#include "thetarank/dataset.hpp"

namespace thetarank {

namespace {

const ThetaParams kPi3 = ThetaParams::pi_over_3();
const ThetaParams k2Pi3 = ThetaParams::two_pi_over_3();

}  // namespace

const std::vector<PublishedCurve>& published_curves() {
    static const std::vector<PublishedCurve> curves = {
        {"646", kPi3, "1292", "-1251948", 3, 3,
         {{"-722", "34656"}, {"6137", "521645"}, {"-1216", "40432"}}, ""},
        {"172081", kPi3, "344162", "-88835611683", 4, 4,
         {{"-505141", "-61627202"}, {"-58621", "-78669382"}, {"-440076", "-143244738"}, {"224175", "92987790"}},
         ""},
        {"221746", kPi3, "443492", "-147513865548", 5, 5,
         {{"345450", "207822720"},
          {"-15792", "49357896"},
          {"994896", "1130036040"},
          {"-13254", "-45063600"},
          {"-386575", "-255989965"}},
         ""},
        {"11229594411", kPi3, "22459188822", "-378311371906687310763", 6, std::nullopt,
         {{"904103532759/25", "-992069570757491352/125"},
          {"1541731888897/16", "2090318638263775025/64"},
          {"265444083202036/2025", "4636387440736982658134/91125"},
          {"719501508201/64", "40873417425022581/512"},
          {"13006760076899764/269361", "1693181585331404000267498/139798359"},
          {"50286669020153449/278784", "11896090671289659453790795/147197952"}},
         ""},
        {"365803464586", kPi3, "731606929172", "-401436524109362868454188", 7, std::nullopt,
         {{"433764757524", "212456676940982628"},
          {"1291274050073", "-1689545579159165609"},
          {"-59335333874904423/3644281", "-570541659890431976790514695/6956932429"},
          {"11954902524369/4", "-45277466996084516865/8"},
          {"2138828658027602/5329", "56890395483549429623312/389017"},
          {"786769181014433554/80089", "721982407380536692088852160/22665187"},
          {"-562236028164373765342/540237049", "3617165210435366625559445197360/12556729729907"}},
         ""},
        {"221", k2Pi3, "-442", "-146523", 3, 3, {{"-204", "1734"}, {"-169", "2704"}, {"4131", "-249696"}}, ""},
        {"12710", k2Pi3, "-25420", "-484632300", 4, 4,
         {{"-310", "384400"}, {"-9920", "-1153200"}, {"48050", "5381600"}, {"76880", "16337000"}},
         ""},
        {"16470069", k2Pi3, "-32940138", "-813789518594283", 5, std::nullopt,
         {{"-3115959/4", "-198146948769/8"},
          {"-16255958103/1024", "-813789518594283/32768"},
          {"118172745075/1849", "-21701053829180880/79507"},
          {"174895662711/3481", "-10850526914590440/205379"},
          {"18013358979/361", "-275820552686448/6859"}},
         ""},
        {"456249066", k2Pi3, "-912498132", "-624489630677617068", 6, std::nullopt,
         {{"1372171206", "2930957696016"},
          {"24303608784", "3714988879700280"},
          {"1677715326", "-33259028622624"},
          {"3635049873", "-183588193835865"},
          {"27273656667348/18769", "39342846732689875284/2571353"},
          {"36967427406/25", "2217080599939296/125"}},
         "4562490669"},
    };
    return curves;
}

const std::vector<PublishedBound>& published_bounds() {
    static const std::vector<PublishedBound> bounds = {
        {"407", kPi3, 3, 1},      {"4718", k2Pi3, 4, 0}, {"6398", k2Pi3, 4, 0},
        {"6", kPi3, std::nullopt, 1}, {"39", kPi3, std::nullopt, 2},
        {"5", k2Pi3, std::nullopt, 1}, {"14", k2Pi3, std::nullopt, 2},
    };
    return bounds;
}

const std::vector<CompanionList>& companion_lists() {
    static const std::vector<CompanionList> lists = {
        {"pi/3 rank 6 (others)", kPi3, false, 6,
         {"167514827545", "198606002595", "2713148227665", "3302971161265", "3492293850595", "6634009064865",
          "4058213000419", "455633303263450"}},
        {"pi/3 Selmer 7", kPi3, true, 7, {"2185135410173", "27441232583014", "1892439367910454"}},
        {"2pi/3 rank 6 (others)", k2Pi3, false, 6,
         {"456249066",    "764046470",     "902472906",     "5062245006",    "9667090290",    "11801899970",
          "19969987310",  "20240772006",   "23819599518",   "24080567966",   "30834423438",   "39360775454",
          "58181539130",  "64256704710",   "98708770590",   "106366008126",  "148280772990",  "181684390314",
          "292826163630", "309000045354",  "333515184002",  "685374515826",  "713465075246",  "685374515826",
          "713465075246", "860842004286",  "1185986591790", "1248260820170", "1185986591790", "1248260820170"}},
        {"2pi/3 Selmer 7", k2Pi3, true, 7, {"162552566", "45010115083565"}},
        {"2pi/3 Selmer 8", k2Pi3, true, 8, {"2118002187593054"}},
    };
    return lists;
}

}  // namespace thetarank
