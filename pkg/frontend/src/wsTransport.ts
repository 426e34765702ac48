// LineTransport over a WebSocket. The bridge forwards one backend line
// per text message, so framing is one-to-one and no buffering is
// needed on this side.

import type { LineTransport } from './client.js';

/** The subset of the browser WebSocket API this transport relies on. */
export interface WebSocketLike {
  addEventListener(type: 'open', listener: () => void): void;
  addEventListener(type: 'message', listener: (event: { data: unknown }) => void): void;
  addEventListener(type: 'close', listener: () => void): void;
  addEventListener(type: 'error', listener: () => void): void;
  send(data: string): void;
  close(): void;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

/** Resolves once the socket is open, so sends never race the handshake. */
export function connectWebSocket(
  url: string,
  factory: WebSocketFactory = (u) => new WebSocket(u) as WebSocketLike,
): Promise<LineTransport> {
  return new Promise((resolve, reject) => {
    const socket = factory(url);
    let lineHandler: (line: string) => void = () => {};
    let closeHandler: () => void = () => {};
    let opened = false;

    socket.addEventListener('message', (event) => {
      for (const line of String(event.data).split('\n')) {
        if (line !== '') {
          lineHandler(line);
        }
      }
    });
    socket.addEventListener('close', () => {
      if (opened) {
        closeHandler();
      } else {
        reject(new Error(`cannot connect to ${url}`));
      }
    });
    socket.addEventListener('error', () => {
      // The close event follows and carries the rejection.
    });
    socket.addEventListener('open', () => {
      opened = true;
      resolve({
        send: (line) => socket.send(line),
        onLine: (handler) => {
          lineHandler = handler;
        },
        onClose: (handler) => {
          closeHandler = handler;
        },
        close: () => socket.close(),
      });
    });
  });
}
