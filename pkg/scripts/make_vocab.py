#!/usr/bin/env python3
"""Regenerate the bundled WordPiece vocabulary (src/ccmask/data/vocab.txt).

Layout: special tokens, every printable ASCII character as an initial and
a continuation piece (guarantees any normalized ASCII word tokenizes
without [UNK]), common suffix pieces, then a list of frequent English
words. Order is fixed so regeneration is byte-stable.
"""
import string
from pathlib import Path

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]

CHARS = list(string.ascii_lowercase) + list(string.digits) + [
    "'", "-", ".", ",", "!", "?", ";", ":", '"', "(", ")", "[", "]", "{", "}",
    "/", "\\", "&", "%", "$", "#", "@", "*", "+", "=", "<", ">", "~", "^",
    "_", "|", "`",
]

SUFFIXES = [
    "##s", "##es", "##ed", "##ing", "##er", "##ers", "##est", "##ly", "##y",
    "##ion", "##tion", "##ions", "##ation", "##al", "##ial", "##ment",
    "##ments", "##ness", "##ity", "##ities", "##able", "##ible", "##ous",
    "##ive", "##ize", "##ise", "##ism", "##ist", "##ists", "##ic", "##ical",
    "##ish", "##en", "##an", "##ian", "##age", "##ful", "##less", "##ship",
    "##hood", "##ward", "##wise", "##like", "##land", "##man", "##men",
    "##ry", "##ty", "##cy", "##ology", "##graphy", "##ware", "##time",
]

WORDS = """
the of and to in a is that it was for on are as with his they at be this
have from or one had by word but not what all were we when your can said
there use an each which she do how their if will up other about out many
then them these so some her would make like him into time has look two
more write go see number no way could people my than first water been
called who am its now find long down day did get come made may part over
new sound take only little work know place years live me back give most
very after things our just name good sentence man think say great where
help through much before line right too means old any same tell boy
following came want show also around form three small set put end does
another well large must big even such because turned here why asked went
men read need land different home us move try kind hand picture again
change off play spell air away animals house point page letters mother
answer found study still learn should world high every near add food
between own below country plants last school father keep trees never
started city earth eyes light thought head under story saw left few while
along might close something seemed next hard open example beginning life
always those both paper together got group often run important until
children side feet car miles night walked white sea began grow took river
four carry state once book hear stop without second later miss idea
enough eat face watch far really almost let above girl sometimes
mountains cut young talk soon list song being leave family body music
color stand sun questions fish area mark dog horse birds problem complete
room knew since ever piece told usually friends easy heard order red door
sure become top ship across today during short better best however low
hours black products happened whole measure remember early waves reached
listen wind rock space covered fast several hold himself toward five step
morning passed vowel true hundred against pattern numeral table north
slowly money map farm pulled draw voice seen cold cried plan notice south
person money became shown minutes strong verb stars front feel fact
inches street decided contain course surface produce building ocean class
note nothing rest carefully scientists inside wheels stay green known
island week less machine base ago stood plane system behind ran round
boat game force brought understand warm common bring explain dry though
language shape deep thousands yes clear equation yet government filled
heat full hot check object bread rule among noun power cannot able six
size dark ball material special heavy fine pair circle include built
matter square syllables perhaps bill felt suddenly test direction center
farmers ready anything divided general energy subject moon region return
believe dance members picked simple cells paint mind love cause rain
exercise bed difference structure act unit flat modern shop teacher
brother tree current network graph model training computer science
university student city animal concept knowledge mask token stage human
learning text data level rate value field train test market service
history research public method result process period natural major
report cost industry team economy practice century series signal
population medicine theory culture design growth development experiment
chemical physical organic metal plastic electric solar engine motor
machine digital software hardware internet memory storage code program
function variable random sample average weight height speed volume
pressure temperature degree chemical atom molecule cell tissue organ
species plant forest desert valley mountain glacier climate weather storm
thunder lightning snow winter summer spring autumn harvest grain wheat
corn rice fruit apple orange banana grape lemon vegetable potato tomato
onion garlic pepper salt sugar honey butter cheese milk cream coffee tea
juice bread cake soup meat chicken beef pork lamb salmon shrimp garden
flower rose tulip daisy grass seed root branch leaf bark trunk insect
butterfly spider snake lizard turtle frog rabbit mouse squirrel deer bear
wolf fox lion tiger elephant monkey whale dolphin shark eagle hawk owl
crow sparrow robin penguin chair sofa desk lamp mirror window curtain
floor ceiling wall roof kitchen bathroom bedroom garage basement attic
hammer wrench screwdriver drill ladder bucket rope chain wire nail screw
glue tape scissors knife spoon fork plate bowl cup glass bottle jar box
bag basket wheel engine brake tire seat steering headlight railway
airport station harbor bridge tunnel highway avenue boulevard sidewalk
corner block tower castle palace temple church mosque museum library
theater cinema stadium arena hospital clinic pharmacy bakery butcher
grocery restaurant cafe hotel office factory warehouse laboratory studio
workshop farm ranch field meadow pasture barn stable fence gate pond lake
stream waterfall spring cliff cave canyon plateau plain coast shore beach
wave tide current island peninsula continent planet star galaxy comet
asteroid orbit rocket satellite telescope microscope compass anchor sail
captain sailor pilot driver farmer doctor nurse lawyer judge police
soldier guard chef waiter barber tailor carpenter plumber electrician
painter sculptor poet writer singer dancer actor director producer
editor journalist photographer athlete coach referee champion winner
loser player opponent audience crowd citizen neighbor stranger friend
enemy partner colleague customer client patient visitor guest host
parent mother father daughter son sister uncle aunt cousin nephew niece
grandmother grandfather husband wife baby child teenager adult elder
"""

OUT = Path(__file__).resolve().parent.parent / "src" / "ccmask" / "data" / "vocab.txt"


def main() -> None:
    pieces: list[str] = []
    seen: set[str] = set()

    def add(piece: str) -> None:
        if piece not in seen:
            seen.add(piece)
            pieces.append(piece)

    for p in SPECIALS:
        add(p)
    for ch in CHARS:
        add(ch)
    for ch in CHARS:
        add("##" + ch)
    for s in SUFFIXES:
        add(s)
    for w in WORDS.split():
        add(w)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(pieces) + "\n", encoding="utf-8")
    print(f"wrote {len(pieces)} pieces to {OUT}")


if __name__ == "__main__":
    main()
