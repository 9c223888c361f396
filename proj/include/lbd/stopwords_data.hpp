#pragma once

// Default stopword stems; mirrors data/stopwords.txt.

#include <array>
#include <string_view>

namespace lbd {

inline constexpr std::array<std::string_view, 300> kDefaultStopwordStems = {
    "a", "about", "abov", "across", "after", "afterward", "again", "against", "all", "almost",
    "alon", "along", "alreadi", "also", "although", "alwai", "am", "among", "amongst", "amoungst",
    "amount", "an", "and", "ani", "anoth", "anyhow", "anyon", "anyth", "anywai", "anywher", "ar",
    "around", "at", "back", "be", "becam", "becaus", "becom", "been", "befor", "beforehand",
    "behind", "below", "besid", "between", "beyond", "bill", "both", "bottom", "but", "by", "call",
    "can", "cannot", "cant", "co", "con", "could", "couldnt", "cry", "de", "describ", "detail",
    "do", "done", "down", "due", "dure", "each", "eg", "eight", "either", "eleven", "els",
    "elsewher", "empti", "enough", "etc", "even", "ever", "everi", "everyon", "everyth",
    "everywher", "except", "few", "fifteen", "fifti", "fill", "find", "fire", "first", "five",
    "for", "former", "formerli", "forti", "found", "four", "from", "front", "full", "further",
    "get", "give", "go", "ha", "had", "hasnt", "have", "he", "henc", "her", "here", "hereaft",
    "herebi", "herein", "hereupon", "herself", "hi", "him", "himself", "how", "howev", "hundr", "i",
    "ie", "if", "in", "inc", "inde", "interest", "into", "it", "itself", "keep", "last", "latter",
    "latterli", "least", "less", "ltd", "made", "mai", "mani", "me", "meanwhil", "might", "mill",
    "mine", "more", "moreov", "most", "mostli", "move", "much", "must", "my", "myself", "name",
    "neither", "never", "nevertheless", "next", "nine", "no", "nobodi", "none", "noon", "nor",
    "not", "noth", "now", "nowher", "of", "off", "often", "on", "onc", "onli", "onto", "or",
    "other", "otherwis", "our", "ourselv", "out", "over", "own", "part", "per", "perhap", "pleas",
    "put", "rather", "re", "same", "see", "seem", "seriou", "sever", "she", "should", "show",
    "side", "sinc", "sincer", "six", "sixti", "so", "some", "somehow", "someon", "someth",
    "sometim", "somewher", "still", "such", "system", "take", "ten", "than", "that", "the", "thei",
    "their", "them", "themselv", "then", "thenc", "there", "thereaft", "therebi", "therefor",
    "therein", "thereupon", "these", "thi", "thick", "thin", "third", "those", "though", "three",
    "through", "throughout", "thru", "thu", "to", "togeth", "too", "top", "toward", "twelv",
    "twenti", "two", "u", "un", "under", "until", "up", "upon", "veri", "via", "wa", "we", "well",
    "were", "what", "whatev", "when", "whenc", "whenev", "where", "wherea", "whereaft", "wherebi",
    "wherein", "whereupon", "wherev", "whether", "which", "while", "whither", "who", "whoever",
    "whole", "whom", "whose", "why", "will", "with", "within", "without", "would", "yet", "you",
    "your", "yourself", "yourselv",
};

}  // namespace lbd
