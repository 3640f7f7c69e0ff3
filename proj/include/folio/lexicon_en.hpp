// Copyright 2026 The Folio Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <string_view>

namespace folio {

// Core English lexicon used when no external tagger is involved. One line
// per tag: "TAG word word=lemma ...". Regular noun plurals and verb -s forms
// are resolved by the tagger and need no entry of their own.
inline constexpr std::string_view kCoreEnglishLexicon = R"(DET the a an this that these those each every some any no all both its their our his her my your such other another either neither which whose what several many few
PREP of for in on with from by about between into over under through within without among across against during upon via
VERB is=be are=be was=be were=be be been=be being=be am=be has=have have had=have having=have do does=do did=do done=do can could may might must shall should will would
VERB use used=use using=use build built=build building=build describe described=describe describing=describe call called=call calling=call define defined=define defining=define refer referred=refer referring=refer include included=include including=include represent represented=represent representing=represent store stored=store require required=require acquire acquired=acquire acquiring=acquire extract extracted=extract make made=make making=make provide provided=provide allow allowed=allow help helped=help support supported=support discuss discussed=discuss encode encoded=encode capture captured=capture organize organized=organize need needed=need rely relied=rely remain remained=remain become became=become show showed=show shown=show consider considered=consider apply applied=apply elicit elicited=elicit eliciting=elicit interview interviewed=interview propose proposed=propose give gave=give given=give take took=take taken=take see saw=see seen=see know knew=know known=know learn learned=learn solve solved=solve reason reasoned=reason infer inferred=infer explain explained=explain study studied=study simulate simulated=simulate depend depended=depend remains=remain play played=play create created=create connect connected=connect link linked=link contain contained=contain compare compared=compare produce produced=produce follow followed=follow mention mentioned=mention treat treated=treat face faced=face turn turned=turn
ADJ artificial formal explicit tacit declarative procedural symbolic large small new early modern human good important different common general specific semantic logical complex simple main central difficult costly useful intelligent automatic manual slow fast rich hard easy first second last whole typical classical key rigid stereotyped everyday familiar abstract concrete hierarchical structured same major
NOUN knowledge representation acquisition intelligence system expert frame script rule formalism network logic ontology engineer machine interview domain problem method tool book chapter page index term concept language program computer inference data fact bottleneck process task research field example approach model structure slot object event situation restaurant reasoning learning question answer decade history goal world memory context meaning part kind type form source way aspect role result value default procedure node link hierarchy class instance property attribute protocol session transcript work time people person point level area step idea notion view theory technique practice application project team interest
NOUN indexes=index indices=index analyses=analysis people=people data=data
PUNCT . , ; : ! ? ( ) [ ] " ' -
OTHER and or but not also very more most how when where who whom there here then than so because if while since as to it they we he she them us them itself themselves only even just still already often usually always never however thus therefore hence yet nor well much)";

}  // namespace folio
