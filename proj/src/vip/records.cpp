#include "vip/records.hpp"

#include "common/error.hpp"

namespace coemu::vip {

codec::PackedBits pack_monitor_record(const MonitorRecord& r) {
  codec::PackedBits head(65);
  head.put(64, 1, r.protocol_error ? 1 : 0);
  head.put(0, 64, r.cycle);
  return codec::concat(head, codec::pack_reg(r.packet));
}

MonitorRecord unpack_monitor_record(const codec::PackedBits& bits) {
  if (bits.width() != kMonitorRecordWidth) throw CodecError("monitor record expects 170 bits");
  MonitorRecord r;
  r.protocol_error = bits.get(169, 1) == 1;
  r.cycle = bits.get(105, 64);
  codec::PackedBits pkt(codec::kRegPacketWidth);
  for (std::size_t i = 0; i < codec::kRegPacketWidth; ++i) pkt.set_bit(i, bits.bit(i));
  r.packet = codec::unpack_reg(pkt);
  return r;
}

}  // namespace coemu::vip
